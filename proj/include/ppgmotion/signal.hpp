#pragma once

#include <cstddef>
#include <vector>

#include "ppgmotion/types.hpp"

namespace ppg::signal {

struct OutlierResult {
    Recording recording;
    std::size_t removed = 0;
};

// Deletes samples whose value lies outside [lo, hi], keeping survivors'
// original timestamps. Throws if more than half the samples would go.
OutlierResult remove_outliers(const Recording& rec, double lo, double hi);

inline constexpr double kDefaultOutlierLo = 1.0;
inline constexpr double kDefaultOutlierHi = 2147483646.0;  // 2^31 - 2

// Subtracts the least-squares straight line; result has ~zero mean.
std::vector<double> detrend(const std::vector<double>& series);

inline constexpr double kDefaultBandLow = 0.0075;   // cycles/sample
inline constexpr double kDefaultBandHigh = 0.2;     // cycles/sample

// Reflect-padding length used by bandpass(), in samples.
std::size_t bandpass_impulse_length(double f_lo);

// 4th-order Butterworth band-pass applied forward and backward (zero phase).
// Frequencies are normalized cycles/sample, 0 < f_lo < f_hi < 0.5.
// Throws if the input is shorter than 3x the impulse length.
std::vector<double> bandpass(const std::vector<double>& series,
                             double f_lo = kDefaultBandLow,
                             double f_hi = kDefaultBandHigh);

// raw -> detrended -> filtered, all length-aligned with the recording.
SignalViews make_views(const Recording& rec,
                       double f_lo = kDefaultBandLow,
                       double f_hi = kDefaultBandHigh);

}  // namespace ppg::signal
