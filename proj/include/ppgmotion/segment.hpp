#pragma once

#include <cstddef>
#include <vector>

#include "ppgmotion/types.hpp"

namespace ppg::segment {

// Centered moving average; the window shrinks symmetrically at the edges.
// window must be odd and within [3, len(series)].
std::vector<double> moving_average_baseline(const std::vector<double>& series, std::size_t window);

// Strict local minima; a plateau bounded by higher samples on both sides
// reports its leftmost index. Endpoints are never minima.
std::vector<std::size_t> local_minima(const std::vector<double>& series);

struct PeriodEstimate {
    std::size_t lag = 0;          // samples
    bool low_confidence = false;  // no autocorrelation peak above 0.2
};

// Highest autocorrelation peak for lags equivalent to 0.5..2.0 s.
// Falls back to 1.0 s when nothing clears 0.2 normalized.
PeriodEstimate estimate_period(const std::vector<double>& filtered, double sample_rate);

struct OnsetResult {
    std::vector<std::size_t> indices;
    std::size_t period = 0;            // samples, from estimate_period
    bool low_confidence_period = false;
    std::vector<double> baseline;      // moving-average baseline used
    std::size_t candidates = 0;        // local minima examined
};

// Onsets are local minima below the moving-average baseline, spaced more
// than half a period apart (earlier minimum wins a conflict). The spacing
// rule is what keeps dicrotic notches out of the onset list.
OnsetResult detect_onsets(const std::vector<double>& filtered, double sample_rate);

// Pulse k spans [onsets[k], onsets[k+1]] inclusive on all three views.
std::vector<Pulse> slice_pulses(const SignalViews& views,
                                const std::vector<std::size_t>& onsets,
                                double sample_rate);

}  // namespace ppg::segment
