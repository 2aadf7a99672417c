#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "ppgmotion/classify.hpp"

namespace ppg::ml {

void AnnNetwork::init(std::size_t in, std::size_t hid, std::size_t out, std::uint64_t seed) {
    inputs = in;
    hidden = hid;
    outputs = out;
    std::mt19937_64 rng(seed ^ 0xa77u);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double s1 = std::sqrt(2.0 / static_cast<double>(std::max<std::size_t>(1, in)));
    const double s2 = std::sqrt(2.0 / static_cast<double>(std::max<std::size_t>(1, hid)));
    w1.resize(hid * in);
    b1.assign(hid, 0.0);
    w2.resize(out * hid);
    b2.assign(out, 0.0);
    for (auto& w : w1) w = s1 * normal(rng);
    for (auto& w : w2) w = s2 * normal(rng);
}

std::vector<double> AnnNetwork::forward(const std::vector<double>& row) const {
    std::vector<double> a1(hidden);
    for (std::size_t h = 0; h < hidden; ++h) {
        double z = b1[h];
        for (std::size_t j = 0; j < inputs; ++j) z += w1[h * inputs + j] * row[j];
        a1[h] = z > 0.0 ? z : 0.0;
    }
    std::vector<double> z2(outputs);
    double z_max = -1e300;
    for (std::size_t o = 0; o < outputs; ++o) {
        double z = b2[o];
        for (std::size_t h = 0; h < hidden; ++h) z += w2[o * hidden + h] * a1[h];
        z2[o] = z;
        z_max = std::max(z_max, z);
    }
    double sum = 0.0;
    for (auto& z : z2) {
        z = std::exp(z - z_max);
        sum += z;
    }
    for (auto& z : z2) z /= sum;
    return z2;
}

std::size_t AnnNetwork::parameter_count() const {
    return w1.size() + b1.size() + w2.size() + b2.size();
}

double AnnNetwork::get_parameter(std::size_t i) const {
    if (i < w1.size()) return w1[i];
    i -= w1.size();
    if (i < b1.size()) return b1[i];
    i -= b1.size();
    if (i < w2.size()) return w2[i];
    i -= w2.size();
    return b2[i];
}

void AnnNetwork::set_parameter(std::size_t i, double v) {
    if (i < w1.size()) {
        w1[i] = v;
        return;
    }
    i -= w1.size();
    if (i < b1.size()) {
        b1[i] = v;
        return;
    }
    i -= b1.size();
    if (i < w2.size()) {
        w2[i] = v;
        return;
    }
    i -= w2.size();
    b2[i] = v;
}

double AnnNetwork::loss_and_gradient(const std::vector<std::vector<double>>& xs,
                                     const std::vector<int>& ys, std::vector<double>* grad) const {
    if (xs.empty() || xs.size() != ys.size())
        throw std::invalid_argument("ann: batch size mismatch");
    const double inv_n = 1.0 / static_cast<double>(xs.size());

    double* gw1 = nullptr;
    double* gb1 = nullptr;
    double* gw2 = nullptr;
    double* gb2 = nullptr;
    if (grad) {
        grad->assign(parameter_count(), 0.0);
        gw1 = grad->data();
        gb1 = gw1 + w1.size();
        gw2 = gb1 + b1.size();
        gb2 = gw2 + w2.size();
    }

    double loss = 0.0;
    std::vector<double> z1(hidden), a1(hidden), p(outputs), dz1(hidden);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto& x = xs[i];
        for (std::size_t h = 0; h < hidden; ++h) {
            double z = b1[h];
            for (std::size_t j = 0; j < inputs; ++j) z += w1[h * inputs + j] * x[j];
            z1[h] = z;
            a1[h] = z > 0.0 ? z : 0.0;
        }
        double z_max = -1e300;
        for (std::size_t o = 0; o < outputs; ++o) {
            double z = b2[o];
            for (std::size_t h = 0; h < hidden; ++h) z += w2[o * hidden + h] * a1[h];
            p[o] = z;
            z_max = std::max(z_max, z);
        }
        double sum = 0.0;
        for (auto& v : p) {
            v = std::exp(v - z_max);
            sum += v;
        }
        for (auto& v : p) v /= sum;
        const auto target = static_cast<std::size_t>(ys[i]);
        loss += -std::log(std::max(p[target], 1e-300)) * inv_n;

        if (!grad) continue;
        // dL/dz2 = softmax - onehot
        p[target] -= 1.0;
        std::fill(dz1.begin(), dz1.end(), 0.0);
        for (std::size_t o = 0; o < outputs; ++o) {
            const double d = p[o] * inv_n;
            gb2[o] += d;
            for (std::size_t h = 0; h < hidden; ++h) {
                gw2[o * hidden + h] += d * a1[h];
                dz1[h] += w2[o * hidden + h] * d;
            }
        }
        for (std::size_t h = 0; h < hidden; ++h) {
            if (z1[h] <= 0.0) continue;
            gb1[h] += dz1[h];
            for (std::size_t j = 0; j < inputs; ++j) gw1[h * inputs + j] += dz1[h] * x[j];
        }
    }
    return loss;
}

AnnClassifier::AnnClassifier(ModelSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), seed_(seed) {
    if (spec_.ann_hidden < 1) throw std::invalid_argument("ann: hidden size must be >= 1");
    if (!(spec_.ann_learning_rate > 0.0)) throw std::invalid_argument("ann: bad learning rate");
}

void AnnClassifier::fit(const Dataset& train) {
    const std::size_t n = train.rows();
    const std::size_t d = train.cols();
    if (n == 0 || d == 0) throw std::invalid_argument("ann: empty training set");

    net_.init(d, static_cast<std::size_t>(spec_.ann_hidden), kNumClasses, seed_);
    train_loss_.clear();

    // Internal stratified hold-out for the early-stop plateau check.
    std::mt19937_64 rng(seed_ ^ 0xbeefu);
    std::array<std::vector<std::size_t>, kNumClasses> byc;
    for (std::size_t i = 0; i < n; ++i) byc[static_cast<std::size_t>(train.y[i])].push_back(i);
    std::vector<std::size_t> fit_idx, val_idx;
    for (auto& idx : byc) {
        if (idx.empty()) continue;
        std::shuffle(idx.begin(), idx.end(), rng);
        std::size_t n_val = idx.size() >= 10 ? idx.size() / 10 : 0;
        for (std::size_t i = 0; i < idx.size(); ++i)
            (i < n_val ? val_idx : fit_idx).push_back(idx[i]);
    }
    const bool use_early_stop = !val_idx.empty();

    std::vector<std::vector<double>> val_x;
    std::vector<int> val_y;
    for (std::size_t i : val_idx) {
        val_x.push_back(train.x[i]);
        val_y.push_back(train.y[i]);
    }

    const auto batch_size = static_cast<std::size_t>(std::max(1, spec_.ann_batch));
    std::vector<double> velocity(net_.parameter_count(), 0.0);
    std::vector<double> grad;
    double plateau_base = 1e300;
    int stale = 0;

    std::vector<std::size_t> order(fit_idx);
    std::vector<std::vector<double>> batch_x;
    std::vector<int> batch_y;
    for (int epoch = 0; epoch < spec_.ann_max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t stop = std::min(order.size(), start + batch_size);
            batch_x.clear();
            batch_y.clear();
            for (std::size_t i = start; i < stop; ++i) {
                batch_x.push_back(train.x[order[i]]);
                batch_y.push_back(train.y[order[i]]);
            }
            epoch_loss += net_.loss_and_gradient(batch_x, batch_y, &grad);
            ++batches;
            for (std::size_t k = 0; k < velocity.size(); ++k) {
                velocity[k] = spec_.ann_momentum * velocity[k] - spec_.ann_learning_rate * grad[k];
                net_.set_parameter(k, net_.get_parameter(k) + velocity[k]);
            }
        }
        train_loss_.push_back(batches ? epoch_loss / static_cast<double>(batches) : 0.0);

        if (use_early_stop) {
            const double val_loss = net_.loss_and_gradient(val_x, val_y, nullptr);
            if (val_loss < plateau_base - 1e-4 * std::max(1.0, std::abs(plateau_base))) {
                plateau_base = val_loss;
                stale = 0;
            } else {
                ++stale;
            }
            // The plateau check only kicks in once training has settled.
            if (epoch >= 50 && stale >= spec_.ann_patience) break;
        }
    }
    fitted_ = true;
}

int AnnClassifier::predict(const std::vector<double>& row) const {
    if (!fitted_) throw std::logic_error("ann: predict called before fit");
    for (double v : row)
        if (!std::isfinite(v)) throw std::invalid_argument("ann: non-finite feature");
    const auto probs = net_.forward(row);
    return static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

std::unique_ptr<Classifier> make_lda(const ModelSpec& spec);
std::unique_ptr<Classifier> make_gaussian_nb(const ModelSpec& spec);
std::unique_ptr<Classifier> make_knn(const ModelSpec& spec);
std::unique_ptr<Classifier> make_decision_tree(const ModelSpec& spec);
std::unique_ptr<Classifier> make_svm(const ModelSpec& spec, std::uint64_t seed);

std::unique_ptr<Classifier> make_classifier(const ModelSpec& spec, std::uint64_t seed) {
    switch (spec.family) {
        case Family::Lda: return make_lda(spec);
        case Family::GaussianNb: return make_gaussian_nb(spec);
        case Family::DecisionTree: return make_decision_tree(spec);
        case Family::Knn: return make_knn(spec);
        case Family::Svm: return make_svm(spec, seed);
        case Family::Ann: return std::make_unique<AnnClassifier>(spec, seed);
    }
    throw std::invalid_argument("unknown model family");
}

}  // namespace ppg::ml
