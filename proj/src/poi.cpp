#include "ppgmotion/poi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ppgmotion/segment.hpp"

namespace ppg::poi {

std::pair<std::size_t, double> find_systolic(const std::vector<double>& view) {
    if (view.empty()) throw std::invalid_argument("find_systolic: empty pulse");
    const auto it = std::max_element(view.begin(), view.end());  // leftmost on ties
    const auto idx = static_cast<std::size_t>(it - view.begin());
    return {idx, *it};
}

std::pair<std::vector<double>, std::vector<double>> derivatives(const std::vector<double>& view,
                                                                double sample_rate) {
    const std::size_t n = view.size();
    if (n < 5) throw std::invalid_argument("derivatives: pulse too short");
    const double fs = sample_rate;
    std::vector<double> d1(n), d2(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d1[i] = (view[i + 1] - view[i - 1]) * 0.5 * fs;
        d2[i] = (view[i + 1] - 2.0 * view[i] + view[i - 1]) * fs * fs;
    }
    d1[0] = (view[1] - view[0]) * fs;
    d1[n - 1] = (view[n - 1] - view[n - 2]) * fs;
    d2[0] = (view[2] - 2.0 * view[1] + view[0]) * fs * fs;
    d2[n - 1] = (view[n - 1] - 2.0 * view[n - 2] + view[n - 3]) * fs * fs;
    return {std::move(d1), std::move(d2)};
}

namespace {

// 5-sample centered mean, shrinking at the edges.
std::vector<double> smooth5(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = std::min({static_cast<std::size_t>(2), i, n - 1 - i});
        double sum = 0.0;
        for (std::size_t j = i - k; j <= i + k; ++j) sum += x[j];
        out[i] = sum / static_cast<double>(2 * k + 1);
    }
    return out;
}

}  // namespace

DiastolicResult find_diastolic(const std::vector<double>& view, double sample_rate,
                               std::size_t systolic_index) {
    const std::size_t n = view.size();
    if (n < 5 || systolic_index >= n) return {};
    auto [d1, d2] = derivatives(view, sample_rate);
    const std::vector<double> d1s = smooth5(d1);

    // Keep clear of the next onset: drop crossings in the last 5% of the pulse.
    const std::size_t guard = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                           std::lround(0.05 * static_cast<double>(n))));
    const std::size_t limit = n - 1 - std::min(guard, n - 1);

    std::size_t crossing = 0;
    bool have_crossing = false;
    for (std::size_t i = systolic_index; i + 1 < n; ++i) {
        if (d1s[i] > 0.0 && d1s[i + 1] <= 0.0) {
            // Crossing lands on whichever sample is nearer the sign change.
            const std::size_t c = (d1s[i] <= -d1s[i + 1]) ? i : i + 1;
            if (c > systolic_index && c <= limit) {
                crossing = c;
                have_crossing = true;  // keep scanning: rightmost wins
            }
        }
    }
    if (!have_crossing) return {};

    bool matched = false;
    for (std::size_t m : segment::local_minima(d2)) {
        const auto delta = (m > crossing) ? m - crossing : crossing - m;
        if (delta <= 3) {
            matched = true;
            break;
        }
    }
    return {true, crossing, view[crossing], !matched};
}

DicroticResult find_dicrotic(const std::vector<double>& view, double sample_rate,
                             std::size_t systolic_index, std::size_t diastolic_index) {
    if (diastolic_index <= systolic_index + 1 || diastolic_index >= view.size()) return {};

    const auto d2 = derivatives(view, sample_rate).second;
    std::size_t best = 0;
    bool found = false;
    double best_d2 = 0.0;
    for (std::size_t m : segment::local_minima(view)) {
        if (m <= systolic_index || m >= diastolic_index) continue;
        if (!found || d2[m] > best_d2) {
            best = m;
            best_d2 = d2[m];
            found = true;
        }
    }
    if (!found) {
        // Shallow notch: no strict minimum, use the lowest interior sample.
        double lowest = view[systolic_index + 1];
        best = systolic_index + 1;
        for (std::size_t i = systolic_index + 1; i < diastolic_index; ++i) {
            if (view[i] < lowest) {
                lowest = view[i];
                best = i;
            }
        }
    }
    return {true, best, view[best]};
}

PulsePoi locate(const Pulse& pulse) {
    const std::size_t n = pulse.filtered.size();
    if (n < 5) throw std::invalid_argument("locate: pulse too short for POI analysis");
    if (pulse.raw.size() != n || pulse.detrended.size() != n)
        throw std::invalid_argument("locate: pulse views are not aligned");

    PulsePoi out;
    const auto [sys_idx, sys_mag] = find_systolic(pulse.filtered);
    (void)sys_mag;
    out.systolic_index = sys_idx;

    const DiastolicResult dia = find_diastolic(pulse.filtered, pulse.sample_rate, sys_idx);
    out.diastolic_found = dia.found;
    out.diastolic_index = dia.index;

    DicroticResult dic;
    if (dia.found) dic = find_dicrotic(pulse.filtered, pulse.sample_rate, sys_idx, dia.index);
    out.dicrotic_found = dic.found;
    out.dicrotic_index = dic.index;

    const auto fill = [&](const std::vector<double>& view) {
        PointsOfInterest p;
        const auto at = [&](std::size_t idx) {
            return Landmark{pulse.start_time + static_cast<double>(idx) / pulse.sample_rate, view[idx]};
        };
        p.onset = at(0);
        p.end = at(n - 1);
        p.systolic = at(sys_idx);
        if (dia.found) {
            p.diastolic = at(dia.index);
            p.diastolic_fallback_used = dia.fallback_used;
        }
        if (dic.found) p.dicrotic = at(dic.index);
        return p;
    };
    out.raw = fill(pulse.raw);
    out.detrended = fill(pulse.detrended);
    out.filtered = fill(pulse.filtered);
    return out;
}

}  // namespace ppg::poi
