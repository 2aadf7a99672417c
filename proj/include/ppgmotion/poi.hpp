#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ppgmotion/types.hpp"

namespace ppg::poi {

// Global maximum of the pulse view, leftmost on ties.
std::pair<std::size_t, double> find_systolic(const std::vector<double>& view);

// Central differences, one-sided at the endpoints. Both outputs match the
// input length.
std::pair<std::vector<double>, std::vector<double>> derivatives(const std::vector<double>& view,
                                                                double sample_rate);

struct DiastolicResult {
    bool found = false;
    std::size_t index = 0;
    double magnitude = 0.0;
    bool fallback_used = false;  // no second-derivative minimum confirmed the crossing
};

// Rightmost falling zero crossing of the (lightly smoothed) first derivative
// after the systolic peak, excluding the final 5% of the pulse. A
// second-derivative local minimum within +-3 samples confirms it; otherwise
// the crossing stands on its own with fallback_used set.
DiastolicResult find_diastolic(const std::vector<double>& view, double sample_rate,
                               std::size_t systolic_index);

struct DicroticResult {
    bool found = false;
    std::size_t index = 0;
    double magnitude = 0.0;
};

// Local minimum of the view strictly between systolic and diastolic with the
// largest second-derivative value; falls back to the interval argmin when the
// dip is too shallow to form a strict minimum.
DicroticResult find_dicrotic(const std::vector<double>& view, double sample_rate,
                             std::size_t systolic_index, std::size_t diastolic_index);

// Landmark indices located on the filtered view and reused across views.
struct PulsePoi {
    PointsOfInterest raw;
    PointsOfInterest detrended;
    PointsOfInterest filtered;
    std::size_t systolic_index = 0;
    std::size_t dicrotic_index = 0;
    std::size_t diastolic_index = 0;
    bool diastolic_found = false;
    bool dicrotic_found = false;
};

PulsePoi locate(const Pulse& pulse);

}  // namespace ppg::poi
