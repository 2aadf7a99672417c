#include "ppgmotion/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ppg::features {

std::size_t feature_index(const std::string& name) {
    for (std::size_t i = 0; i < kFeatureCount; ++i)
        if (name == kFeatureNames[i]) return i;
    throw std::invalid_argument("unknown feature name: " + name);
}

double orthostatic_baseline_value(const std::vector<Landmark>& systolic_peaks,
                                  double stationary_window) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& peak : systolic_peaks) {
        if (peak.t >= 0.0 && peak.t < stationary_window) {
            sum += peak.m;
            ++count;
        }
    }
    if (count < 3)
        throw std::runtime_error("orthostatic baseline: fewer than 3 pulses in the stationary window");
    return sum / static_cast<double>(count);
}

std::vector<double> orthostatic_magnitude(const std::vector<Landmark>& systolic_peaks,
                                          double stationary_window) {
    const double baseline = orthostatic_baseline_value(systolic_peaks, stationary_window);
    std::vector<double> out;
    out.reserve(systolic_peaks.size());
    for (const auto& peak : systolic_peaks) out.push_back(peak.m - baseline);
    return out;
}

OrthostaticBaseline orthostatic_baseline(const std::vector<poi::PulsePoi>& pois,
                                         double stationary_window) {
    std::vector<Landmark> raw_peaks, det_peaks;
    raw_peaks.reserve(pois.size());
    det_peaks.reserve(pois.size());
    for (const auto& p : pois) {
        raw_peaks.push_back({p.raw.onset.t, p.raw.systolic.m});
        det_peaks.push_back({p.detrended.onset.t, p.detrended.systolic.m});
    }
    return {orthostatic_baseline_value(raw_peaks, stationary_window),
            orthostatic_baseline_value(det_peaks, stationary_window)};
}

FeatureVector extract_features(const Pulse& pulse, const poi::PulsePoi& poi,
                               const OrthostaticBaseline& baseline) {
    const PointsOfInterest& fil = poi.filtered;
    const PointsOfInterest& raw = poi.raw;
    const PointsOfInterest& det = poi.detrended;

    FeatureVector fv;
    fv.pulse_index = pulse.index;
    fv.quality_flag = !fil.diastolic.has_value() || !fil.dicrotic.has_value();

    auto& v = fv.values;
    const double width = fil.end.t - fil.onset.t;
    const double rise_dt = fil.systolic.t - fil.onset.t;

    v[feature_index("pulse_width")] = width;
    v[feature_index("systolic_magnitude")] = fil.systolic.m;
    v[feature_index("pulse_onset_magnitude")] = fil.onset.m;
    v[feature_index("end_point_magnitude")] = fil.end.m;
    v[feature_index("systolic_amplitude")] = fil.systolic.m - fil.onset.m;
    v[feature_index("raw_systolic_amplitude")] = raw.systolic.m - raw.onset.m;
    v[feature_index("detrended_systolic_amplitude")] = det.systolic.m - det.onset.m;
    v[feature_index("offset")] = fil.end.m - fil.onset.m;
    v[feature_index("raw_offset")] = raw.end.m - raw.onset.m;
    v[feature_index("detrended_offset")] = det.end.m - det.onset.m;
    v[feature_index("systolic_rise_gradient")] =
        rise_dt > 0.0 ? (fil.systolic.m - fil.onset.m) / rise_dt : 0.0;
    v[feature_index("raw_orthostatic_magnitude")] = raw.systolic.m - baseline.raw;
    v[feature_index("detrended_orthostatic_magnitude")] = det.systolic.m - baseline.detrended;

    if (fil.diastolic) {
        v[feature_index("diastolic_magnitude")] = fil.diastolic->m;
        v[feature_index("diastolic_amplitude")] = fil.diastolic->m - fil.onset.m;
        v[feature_index("raw_diastolic_amplitude")] = raw.diastolic->m - raw.onset.m;
        v[feature_index("detrended_diastolic_amplitude")] = det.diastolic->m - det.onset.m;
        v[feature_index("peak_difference")] = fil.systolic.m - fil.diastolic->m;
    }
    if (fil.dicrotic) v[feature_index("dicrotic_magnitude")] = fil.dicrotic->m;

    // Phases split the pulse at the notch; without one they split at the
    // diastolic peak, and a landmark-free pulse is all systolic phase.
    double split_t = fil.end.t;
    if (fil.dicrotic)
        split_t = fil.dicrotic->t;
    else if (fil.diastolic)
        split_t = fil.diastolic->t;
    v[feature_index("systolic_phase")] = split_t - fil.onset.t;
    v[feature_index("diastolic_phase")] = fil.end.t - split_t;

    return fv;
}

namespace {

// Equal-frequency bin cutpoints: values at fixed ranks, so any strictly
// monotone transform of the feature leaves bin membership unchanged.
std::vector<double> bin_cutpoints(std::vector<double> values, std::size_t bins) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    std::vector<double> cuts;
    for (std::size_t b = 1; b < bins; ++b) {
        const std::size_t rank = b * n / bins;
        if (rank == 0 || rank >= n) continue;
        cuts.push_back(values[rank - 1]);
    }
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    // Drop cutpoints equal to the overall maximum: they would create an
    // empty top bin.
    while (!cuts.empty() && cuts.back() >= values.back()) cuts.pop_back();
    return cuts;
}

}  // namespace

double chi_squared_stat(const std::vector<double>& values, const std::vector<int>& classes,
                        std::size_t num_classes, std::size_t bins) {
    if (values.size() != classes.size() || values.empty())
        throw std::invalid_argument("chi_squared_stat: values/classes size mismatch");
    if (num_classes < 2) throw std::invalid_argument("chi_squared_stat: need at least 2 classes");

    const auto cuts = bin_cutpoints(values, bins);
    const std::size_t n_bins = cuts.size() + 1;
    if (n_bins < 2) return 0.0;  // single distinct value

    std::vector<std::vector<double>> observed(n_bins, std::vector<double>(num_classes, 0.0));
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto bin = static_cast<std::size_t>(
            std::lower_bound(cuts.begin(), cuts.end(), values[i]) - cuts.begin());
        observed[bin][static_cast<std::size_t>(classes[i])] += 1.0;
    }

    std::vector<double> row_sum(n_bins, 0.0), col_sum(num_classes, 0.0);
    double total = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b)
        for (std::size_t c = 0; c < num_classes; ++c) {
            row_sum[b] += observed[b][c];
            col_sum[c] += observed[b][c];
            total += observed[b][c];
        }

    double stat = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b)
        for (std::size_t c = 0; c < num_classes; ++c) {
            const double expected = row_sum[b] * col_sum[c] / total;
            if (expected > 0.0) {
                const double d = observed[b][c] - expected;
                stat += d * d / expected;
            }
        }
    return stat;
}

std::vector<RankEntry> chi_squared_scores(const std::vector<FeatureVector>& dataset) {
    if (dataset.empty()) throw std::invalid_argument("chi_squared_scores: empty dataset");
    std::vector<int> classes;
    classes.reserve(dataset.size());
    bool multi_class = false;
    for (const auto& row : dataset) {
        classes.push_back(static_cast<int>(row.label));
        if (row.label != dataset.front().label) multi_class = true;
    }
    if (!multi_class) throw std::invalid_argument("chi_squared_scores: need at least 2 classes");

    std::vector<RankEntry> ranking;
    ranking.reserve(kFeatureCount);
    std::vector<double> column(dataset.size());
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        for (std::size_t i = 0; i < dataset.size(); ++i) column[i] = dataset[i].values[f];
        ranking.push_back({kFeatureNames[f], chi_squared_stat(column, classes, kNumClasses)});
    }
    std::stable_sort(ranking.begin(), ranking.end(),
                     [](const RankEntry& a, const RankEntry& b) { return a.score > b.score; });
    return ranking;
}

std::vector<bool> select_features(const std::vector<std::string>& drop) {
    std::vector<bool> mask(kFeatureCount, true);
    for (const auto& name : drop) mask[feature_index(name)] = false;
    if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; }))
        throw std::invalid_argument("select_features: cannot drop every feature");
    return mask;
}

}  // namespace ppg::features
