#include "ppgmotion/signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace ppg::signal {

namespace {

constexpr double kPi = std::numbers::pi;

struct Biquad {
    double b0, b1, b2;  // numerator
    double a1, a2;      // denominator (a0 == 1)
};

// Order-2 Butterworth low-pass prototype mapped to a band-pass (4 poles),
// discretized with the bilinear transform. Zeros land at z=+1 and z=-1.
std::vector<Biquad> design_butterworth_bandpass(double f_lo, double f_hi) {
    const double w1 = std::tan(kPi * f_lo);
    const double w2 = std::tan(kPi * f_hi);
    const double bw = w2 - w1;
    const double w0sq = w1 * w2;

    // One prototype pole of the conjugate pair; the other pair member yields
    // the conjugate band-pass poles.
    const std::complex<double> proto = std::polar(1.0, 3.0 * kPi / 4.0);
    const std::complex<double> pb = proto * bw;
    const std::complex<double> disc = std::sqrt(pb * pb - 4.0 * w0sq);
    const std::complex<double> s_poles[2] = {0.5 * (pb + disc), 0.5 * (pb - disc)};

    std::vector<Biquad> sections;
    for (const auto& s : s_poles) {
        const std::complex<double> z = (1.0 + s) / (1.0 - s);
        // Denominator from the conjugate pole pair; numerator (z-1)(z+1).
        sections.push_back({1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
    }

    // Unit gain at the (prewarped) geometric center frequency.
    const double f0 = std::atan(std::sqrt(w0sq)) / kPi;
    const std::complex<double> zc = std::polar(1.0, 2.0 * kPi * f0);
    std::complex<double> h = 1.0;
    for (const auto& sec : sections) {
        const std::complex<double> num = sec.b0 * zc * zc + sec.b1 * zc + sec.b2;
        const std::complex<double> den = zc * zc + sec.a1 * zc + sec.a2;
        h *= num / den;
    }
    const double g = std::abs(h);
    if (!(g > 0.0)) throw std::runtime_error("bandpass: degenerate filter design");
    sections.front().b0 /= g;
    sections.front().b1 /= g;
    sections.front().b2 /= g;
    return sections;
}

void filter_in_place(const std::vector<Biquad>& sections, std::vector<double>& x) {
    for (const auto& s : sections) {
        double z1 = 0.0, z2 = 0.0;  // transposed direct form II state
        for (double& v : x) {
            const double in = v;
            const double out = s.b0 * in + z1;
            z1 = s.b1 * in - s.a1 * out + z2;
            z2 = s.b2 * in - s.a2 * out;
            v = out;
        }
    }
}

}  // namespace

OutlierResult remove_outliers(const Recording& rec, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("remove_outliers: need lo < hi");
    OutlierResult result;
    result.recording.sample_rate = rec.sample_rate;
    result.recording.label = rec.label;
    result.recording.source_id = rec.source_id;
    result.recording.time_s.reserve(rec.size());
    result.recording.value.reserve(rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) {
        if (rec.value[i] < lo || rec.value[i] > hi) {
            ++result.removed;
        } else {
            result.recording.time_s.push_back(rec.time_s[i]);
            result.recording.value.push_back(rec.value[i]);
        }
    }
    if (rec.size() > 0 && result.removed * 2 > rec.size())
        throw std::runtime_error("remove_outliers: more than 50% of samples out of range");
    return result;
}

std::vector<double> detrend(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 2) throw std::invalid_argument("detrend: need at least 2 samples");
    const double mid = 0.5 * static_cast<double>(n - 1);
    double sxx = 0.0, sxy = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = static_cast<double>(i) - mid;
        sxx += xi * xi;
        sxy += xi * series[i];
        sy += series[i];
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    const double mean = sy / static_cast<double>(n);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = series[i] - (mean + slope * (static_cast<double>(i) - mid));
    return out;
}

std::size_t bandpass_impulse_length(double f_lo) {
    if (!(f_lo > 0.0)) throw std::invalid_argument("bandpass: f_lo must be positive");
    return static_cast<std::size_t>(std::ceil(1.0 / f_lo));
}

std::vector<double> bandpass(const std::vector<double>& series, double f_lo, double f_hi) {
    if (!(0.0 < f_lo && f_lo < f_hi && f_hi < 0.5))
        throw std::invalid_argument("bandpass: need 0 < f_lo < f_hi < 0.5 cycles/sample");
    const std::size_t n = series.size();
    const std::size_t pad = bandpass_impulse_length(f_lo);
    if (n < 3 * pad)
        throw std::invalid_argument("bandpass: input shorter than 3x filter impulse length");

    // Odd reflection at both ends keeps the signal level continuous so the
    // filter state settles inside the padding.
    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i) ext.push_back(2.0 * series.front() - series[pad - i]);
    ext.insert(ext.end(), series.begin(), series.end());
    for (std::size_t i = 0; i < pad; ++i) ext.push_back(2.0 * series.back() - series[n - 2 - i]);

    const auto sections = design_butterworth_bandpass(f_lo, f_hi);
    filter_in_place(sections, ext);
    std::reverse(ext.begin(), ext.end());
    filter_in_place(sections, ext);
    std::reverse(ext.begin(), ext.end());

    return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
            ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

SignalViews make_views(const Recording& rec, double f_lo, double f_hi) {
    SignalViews views;
    views.time_s = rec.time_s;
    views.raw = rec.value;
    views.detrended = detrend(views.raw);
    views.filtered = bandpass(views.detrended, f_lo, f_hi);
    return views;
}

}  // namespace ppg::signal
