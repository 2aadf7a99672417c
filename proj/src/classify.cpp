#include "ppgmotion/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ppg::ml {

std::array<std::size_t, kNumClasses> Dataset::class_counts() const {
    std::array<std::size_t, kNumClasses> counts{};
    for (int label : y) counts[static_cast<std::size_t>(label)]++;
    return counts;
}

void Standardizer::fit(const Dataset& train) {
    const std::size_t d = train.cols();
    const std::size_t n = train.rows();
    if (n == 0) throw std::invalid_argument("standardizer: empty training set");
    mean.assign(d, 0.0);
    stddev.assign(d, 0.0);
    for (const auto& row : train.x)
        for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
    for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);
    for (const auto& row : train.x)
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = row[j] - mean[j];
            stddev[j] += diff * diff;
        }
    for (std::size_t j = 0; j < d; ++j) {
        stddev[j] = std::sqrt(stddev[j] / static_cast<double>(n));
        if (stddev[j] < 1e-12) stddev[j] = 1.0;  // constant column
    }
}

std::vector<double> Standardizer::apply(const std::vector<double>& row) const {
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / stddev[j];
    return out;
}

Dataset Standardizer::apply(const Dataset& data) const {
    Dataset out;
    out.y = data.y;
    out.feature_names = data.feature_names;
    out.x.reserve(data.rows());
    for (const auto& row : data.x) out.x.push_back(apply(row));
    return out;
}

namespace {

void check_finite(const Dataset& data) {
    for (const auto& row : data.x)
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("dataset contains non-finite feature");
}

std::array<std::vector<std::size_t>, kNumClasses> indices_by_class(const Dataset& data) {
    std::array<std::vector<std::size_t>, kNumClasses> byc;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const int label = data.y[i];
        if (label < 0 || label >= static_cast<int>(kNumClasses))
            throw std::invalid_argument("dataset label out of range");
        byc[static_cast<std::size_t>(label)].push_back(i);
    }
    return byc;
}

void append_row(Dataset& dst, const Dataset& src, std::size_t i) {
    dst.x.push_back(src.x[i]);
    dst.y.push_back(src.y[i]);
}

}  // namespace

Split split_stratified(const Dataset& data, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("split: test fraction must be in (0,1)");
    check_finite(data);
    auto byc = indices_by_class(data);
    std::mt19937_64 rng(seed ^ 0x51177u);

    Split split;
    split.train.feature_names = data.feature_names;
    split.test.feature_names = data.feature_names;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        auto& idx = byc[c];
        if (idx.empty()) continue;
        if (idx.size() < 10)
            throw std::invalid_argument("split: class " + to_string(static_cast<Label>(c)) +
                                        " has fewer than 10 rows");
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto n_test = static_cast<std::size_t>(
            std::max<long>(1, std::lround(test_fraction * static_cast<double>(idx.size()))));
        for (std::size_t i = 0; i < idx.size(); ++i)
            append_row(i < n_test ? split.test : split.train, data, idx[i]);
    }
    return split;
}

double cross_validate(const Dataset& train, const ModelSpec& spec, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("cross_validate: k must be at least 2");
    check_finite(train);
    auto byc = indices_by_class(train);
    for (std::size_t c = 0; c < kNumClasses; ++c)
        if (!byc[c].empty() && byc[c].size() < static_cast<std::size_t>(k))
            throw std::invalid_argument("cross_validate: k exceeds the smallest class count");

    std::mt19937_64 rng(seed ^ 0xf01d5u);
    std::array<std::vector<std::size_t>, kNumClasses> folded = byc;
    for (auto& idx : folded) std::shuffle(idx.begin(), idx.end(), rng);

    double accuracy_sum = 0.0;
    for (int fold = 0; fold < k; ++fold) {
        Dataset fit_set, val_set;
        fit_set.feature_names = train.feature_names;
        val_set.feature_names = train.feature_names;
        for (const auto& idx : folded)
            for (std::size_t i = 0; i < idx.size(); ++i)
                append_row(static_cast<int>(i % static_cast<std::size_t>(k)) == fold ? val_set : fit_set,
                           train, idx[i]);

        Standardizer scaler;
        scaler.fit(fit_set);
        const Dataset fit_std = scaler.apply(fit_set);

        auto model = make_classifier(spec, seed + static_cast<std::uint64_t>(fold) * 7919u);
        model->fit(fit_std);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < val_set.rows(); ++i)
            if (model->predict(scaler.apply(val_set.x[i])) == val_set.y[i]) ++correct;
        accuracy_sum += 100.0 * static_cast<double>(correct) / static_cast<double>(val_set.rows());
    }
    return accuracy_sum / static_cast<double>(k);
}

ClassMetrics metrics_from_counts(long tp, long tn, long fp, long fn) {
    ClassMetrics m;
    m.tp = tp;
    m.tn = tn;
    m.fp = fp;
    m.fn = fn;
    if (tp + fp > 0) {
        m.precision = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp);
    } else {
        m.undefined = true;
    }
    if (tp + fn > 0) {
        m.sensitivity = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn);
    } else {
        m.undefined = true;
    }
    if (m.precision + m.sensitivity > 0.0)
        m.f1 = 2.0 * m.precision * m.sensitivity / (m.precision + m.sensitivity);
    return m;
}

Evaluation evaluate(const Classifier& model, const Dataset& test) {
    if (test.rows() == 0) throw std::invalid_argument("evaluate: empty test set");
    check_finite(test);
    Evaluation ev;
    ev.total = test.rows();
    for (std::size_t i = 0; i < test.rows(); ++i) {
        const int pred = model.predict(test.x[i]);
        ev.confusion[static_cast<std::size_t>(test.y[i])][static_cast<std::size_t>(pred)]++;
    }
    long correct = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) correct += ev.confusion[c][c];
    ev.accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(ev.total);

    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const long tp = ev.confusion[c][c];
        long fp = 0, fn = 0;
        for (std::size_t o = 0; o < kNumClasses; ++o) {
            if (o == c) continue;
            fp += ev.confusion[o][c];
            fn += ev.confusion[c][o];
        }
        const long tn = static_cast<long>(ev.total) - tp - fp - fn;
        ev.per_class[c] = metrics_from_counts(tp, tn, fp, fn);
    }
    return ev;
}

std::vector<ModelSpec> default_presets() {
    std::vector<ModelSpec> presets;
    auto add = [&](std::string name, Family family, auto&&... setup) {
        ModelSpec spec;
        spec.name = std::move(name);
        spec.family = family;
        (setup(spec), ...);
        presets.push_back(std::move(spec));
    };
    add("lda", Family::Lda);
    add("gaussian_nb", Family::GaussianNb);
    add("decision_tree", Family::DecisionTree);
    add("knn_fine", Family::Knn, [](ModelSpec& s) { s.knn_k = 1; });
    add("knn_medium", Family::Knn, [](ModelSpec& s) { s.knn_k = 10; });
    add("knn_coarse", Family::Knn, [](ModelSpec& s) { s.knn_k = 100; });
    add("svm_linear", Family::Svm, [](ModelSpec& s) { s.svm_degree = 1; });
    add("svm_quadratic", Family::Svm, [](ModelSpec& s) { s.svm_degree = 2; });
    add("svm_cubic", Family::Svm, [](ModelSpec& s) { s.svm_degree = 3; });
    add("ann_narrow", Family::Ann, [](ModelSpec& s) { s.ann_hidden = 10; });
    add("ann_medium", Family::Ann, [](ModelSpec& s) { s.ann_hidden = 25; });
    add("ann_wide", Family::Ann, [](ModelSpec& s) { s.ann_hidden = 100; });
    return presets;
}

ModelSpec preset_by_name(const std::string& name) {
    for (auto& spec : default_presets())
        if (spec.name == name) return spec;
    throw std::invalid_argument("unknown model preset: " + name);
}

std::vector<ModelReport> benchmark_grid(const Dataset& data, const std::vector<ModelSpec>& presets,
                                        std::uint64_t seed) {
    const Split split = split_stratified(data, 0.1, seed);
    Standardizer scaler;
    scaler.fit(split.train);
    const Dataset train_std = scaler.apply(split.train);
    const Dataset test_std = scaler.apply(split.test);

    std::vector<ModelReport> reports;
    for (const auto& spec : presets) {
        ModelReport report;
        report.model = spec.name;
        try {
            report.validation_accuracy = cross_validate(split.train, spec, 10, seed);
            auto model = make_classifier(spec, seed);
            model->fit(train_std);
            report.eval = evaluate(*model, test_std);
            report.test_accuracy = report.eval.accuracy;
            report.per_class = report.eval.per_class;
        } catch (const std::exception& e) {
            report.ok = false;
            report.error = e.what();
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

}  // namespace ppg::ml
