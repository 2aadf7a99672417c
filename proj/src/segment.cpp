#include "ppgmotion/segment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ppg::segment {

std::vector<double> moving_average_baseline(const std::vector<double>& series, std::size_t window) {
    const std::size_t n = series.size();
    if (window % 2 == 0) throw std::invalid_argument("moving average: window must be odd");
    if (window < 3 || window > n)
        throw std::invalid_argument("moving average: window must be in [3, len(series)]");
    std::vector<double> prefix(n + 1, 0.0);
    std::partial_sum(series.begin(), series.end(), prefix.begin() + 1);
    const std::size_t half = (window - 1) / 2;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = std::min({half, i, n - 1 - i});
        out[i] = (prefix[i + k + 1] - prefix[i - k]) / static_cast<double>(2 * k + 1);
    }
    return out;
}

std::vector<std::size_t> local_minima(const std::vector<double>& series) {
    std::vector<std::size_t> minima;
    const std::size_t n = series.size();
    if (n < 3) return minima;
    std::size_t i = 1;
    while (i + 1 < n) {
        if (series[i] < series[i - 1]) {
            std::size_t j = i;
            while (j + 1 < n && series[j + 1] == series[i]) ++j;
            if (j + 1 < n && series[j + 1] > series[i]) minima.push_back(i);
            i = j + 1;
        } else {
            ++i;
        }
    }
    return minima;
}

PeriodEstimate estimate_period(const std::vector<double>& filtered, double sample_rate) {
    const std::size_t n = filtered.size();
    if (!(sample_rate > 0.0)) throw std::invalid_argument("estimate_period: bad sample rate");
    if (n < static_cast<std::size_t>(3.0 * sample_rate))
        throw std::invalid_argument("estimate_period: need at least 3 s of signal");

    const double mean = std::accumulate(filtered.begin(), filtered.end(), 0.0) / static_cast<double>(n);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = filtered[i] - mean;
    double r0 = 0.0;
    for (double v : x) r0 += v * v;

    const auto fallback = static_cast<std::size_t>(std::lround(sample_rate));
    if (r0 <= 0.0) return {fallback, true};

    const auto lag_lo = static_cast<std::size_t>(std::lround(0.5 * sample_rate));
    const auto lag_hi = std::min(static_cast<std::size_t>(std::lround(2.0 * sample_rate)), n - 2);
    if (lag_lo < 1 || lag_lo > lag_hi) return {fallback, true};

    auto acf = [&](std::size_t lag) {
        double r = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) r += x[i] * x[i + lag];
        return r / r0;
    };

    // Peaks only: a lag whose autocorrelation tops both neighbours.
    double best = 0.0;
    std::size_t best_lag = 0;
    double prev = acf(lag_lo - 1);
    double cur = acf(lag_lo);
    for (std::size_t lag = lag_lo; lag <= lag_hi; ++lag) {
        const double next = acf(lag + 1);
        if (cur >= prev && cur >= next && cur > best) {
            best = cur;
            best_lag = lag;
        }
        prev = cur;
        cur = next;
    }
    if (best < 0.2 || best_lag == 0) return {fallback, true};
    return {best_lag, false};
}

OnsetResult detect_onsets(const std::vector<double>& filtered, double sample_rate) {
    const std::size_t n = filtered.size();
    if (n < static_cast<std::size_t>(3.0 * sample_rate))
        throw std::invalid_argument("detect_onsets: need at least 3 s of signal");

    OnsetResult result;
    const PeriodEstimate pe = estimate_period(filtered, sample_rate);
    result.period = pe.lag;
    result.low_confidence_period = pe.low_confidence;

    std::size_t window = pe.lag | 1;  // round up to odd
    window = std::max<std::size_t>(3, std::min(window, (n - 1) | 1));
    if (window > n) window = (n % 2 == 1) ? n : n - 1;
    result.baseline = moving_average_baseline(filtered, window);

    const double min_spacing = static_cast<double>(pe.lag) / 2.0;
    const auto minima = local_minima(filtered);
    result.candidates = minima.size();
    for (std::size_t m : minima) {
        if (!(filtered[m] < result.baseline[m])) continue;
        if (!result.indices.empty() &&
            static_cast<double>(m - result.indices.back()) <= min_spacing)
            continue;
        result.indices.push_back(m);
    }
    return result;
}

std::vector<Pulse> slice_pulses(const SignalViews& views,
                                const std::vector<std::size_t>& onsets,
                                double sample_rate) {
    if (onsets.size() < 2)
        throw std::invalid_argument("slice_pulses: need at least 2 onsets");
    for (std::size_t i = 1; i < onsets.size(); ++i)
        if (!(onsets[i] > onsets[i - 1]))
            throw std::invalid_argument("slice_pulses: onsets must be strictly ascending");
    if (onsets.back() >= views.size())
        throw std::invalid_argument("slice_pulses: onset index beyond signal");

    std::vector<Pulse> pulses;
    pulses.reserve(onsets.size() - 1);
    for (std::size_t k = 0; k + 1 < onsets.size(); ++k) {
        const std::size_t a = onsets[k];
        const std::size_t b = onsets[k + 1];
        Pulse p;
        p.index = k;
        p.sample_rate = sample_rate;
        p.start_time = views.time_s[a];
        p.end_time = views.time_s[b];
        const auto first = static_cast<std::ptrdiff_t>(a);
        const auto last = static_cast<std::ptrdiff_t>(b + 1);
        p.raw.assign(views.raw.begin() + first, views.raw.begin() + last);
        p.detrended.assign(views.detrended.begin() + first, views.detrended.begin() + last);
        p.filtered.assign(views.filtered.begin() + first, views.filtered.begin() + last);
        pulses.push_back(std::move(p));
    }
    return pulses;
}

}  // namespace ppg::segment
