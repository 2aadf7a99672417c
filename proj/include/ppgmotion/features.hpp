#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "ppgmotion/poi.hpp"
#include "ppgmotion/types.hpp"

namespace ppg::features {

inline constexpr std::size_t kFeatureCount = 21;

// Importance order from the reference feature table.
inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "systolic_magnitude",
    "systolic_rise_gradient",
    "raw_systolic_amplitude",
    "systolic_amplitude",
    "peak_difference",
    "detrended_systolic_amplitude",
    "pulse_onset_magnitude",
    "raw_offset",
    "raw_orthostatic_magnitude",
    "pulse_width",
    "end_point_magnitude",
    "detrended_offset",
    "diastolic_amplitude",
    "raw_diastolic_amplitude",
    "systolic_phase",
    "diastolic_phase",
    "offset",
    "detrended_orthostatic_magnitude",
    "detrended_diastolic_amplitude",
    "diastolic_magnitude",
    "dicrotic_magnitude",
};

std::size_t feature_index(const std::string& name);  // throws on unknown name

struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    Label label = Label::Stationary;
    std::size_t pulse_index = 0;
    bool quality_flag = false;  // a landmark was absent and defaulted to 0
};

struct OrthostaticBaseline {
    double raw = 0.0;
    double detrended = 0.0;
};

// Mean systolic magnitude over pulses whose onset falls inside the
// stationary window. Throws when fewer than 3 qualify (recording unusable).
// Each landmark pairs the pulse onset time with the systolic magnitude.
double orthostatic_baseline_value(const std::vector<Landmark>& systolic_peaks,
                                  double stationary_window);

// Per-pulse orthostatic magnitudes: systolic magnitude minus the baseline.
std::vector<double> orthostatic_magnitude(const std::vector<Landmark>& systolic_peaks,
                                          double stationary_window);

OrthostaticBaseline orthostatic_baseline(const std::vector<poi::PulsePoi>& pois,
                                         double stationary_window);

FeatureVector extract_features(const Pulse& pulse, const poi::PulsePoi& poi,
                               const OrthostaticBaseline& baseline);

struct RankEntry {
    std::string name;
    double score = 0.0;
};

// Chi-squared statistic of the 10-equal-frequency-bin x class contingency
// table per feature, sorted by descending importance.
std::vector<RankEntry> chi_squared_scores(const std::vector<FeatureVector>& dataset);

// Column-level variant used by the ranking and its tests.
double chi_squared_stat(const std::vector<double>& values, const std::vector<int>& classes,
                        std::size_t num_classes, std::size_t bins = 10);

// Active-feature mask after removing the drop list (default: dicrotic_magnitude).
std::vector<bool> select_features(const std::vector<std::string>& drop = {"dicrotic_magnitude"});

}  // namespace ppg::features
