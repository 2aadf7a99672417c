#include "ppgmotion/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ppgmotion/signal.hpp"

namespace ppg::synth {

namespace {

constexpr double kPi = std::numbers::pi;

// Post-diastolic descent: a quarter-cosine shoulder (smooth at the peak,
// strictly negative slope at its end) over kShoulderFrac of the remaining
// span, then a linear plunge to zero. Slopes steepen monotonically, so the
// filtered waveform has no flat stretch where noise could fake extrema, and
// the signal only dips under its cycle mean close to the next onset.
constexpr double kShoulderFrac = 0.45;
constexpr double kShoulderDip = 0.02;  // shoulder ends this far (x systolic_amp) below the notch

// Recordings open mid-descent: the first beat starts this far back into its
// cycle, so the first in-recording junction is an ordinary steep onset.
constexpr double kLeadInPhase = 0.60;

// Pulse amplitudes shrink while blood volume is redistributing; the dip
// tracks the transient's gradient, so it peaks during the movement itself
// and fades through the recovery.
constexpr double kAmpDipPerSlope = 2.5;  // seconds: dip fraction per unit relative slope
constexpr double kAmpDipMax = 0.45;

double half_cos_fall(double from, double to, double u) {
    return to + (from - to) * 0.5 * (1.0 + std::cos(kPi * u));
}

double half_cos_rise(double from, double to, double u) {
    return from + (to - from) * 0.5 * (1.0 - std::cos(kPi * u));
}

// Continuous pulse profile on [0, period]; zero outside.
double pulse_value(const PulseTemplate& tpl, double t) {
    const double T = tpl.period;
    if (t <= 0.0 || t >= T) return 0.0;
    const double ts = tpl.systolic_time();
    const double tn = tpl.notch_time();
    const double td = tpl.diastolic_time();
    const double vn = tpl.notch_value();
    const double as = tpl.systolic_amp;
    const double ad = tpl.diastolic_amp;
    const double tk = td + kShoulderFrac * (T - td);       // shoulder -> plunge knee
    const double vr = std::max(0.0, vn - kShoulderDip * as);  // knee level

    if (t < ts) return as * std::sin(0.5 * kPi * t / ts);
    if (t < tn) return half_cos_fall(as, vn, (t - ts) / (tn - ts));
    if (t < td) return half_cos_rise(vn, ad, (t - tn) / (td - tn));
    if (t < tk) return vr + (ad - vr) * std::cos(0.5 * kPi * (t - td) / (tk - td));
    return vr * (T - t) / (T - tk);
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string("pulse template: non-finite ") + what);
}

}  // namespace

void PulseTemplate::validate() const {
    require_finite(period, "period");
    require_finite(systolic_amp, "systolic_amp");
    require_finite(systolic_time_frac, "systolic_time_frac");
    require_finite(diastolic_amp, "diastolic_amp");
    require_finite(diastolic_time_frac, "diastolic_time_frac");
    require_finite(notch_depth_frac, "notch_depth_frac");
    if (!(period > 0.0))
        throw std::invalid_argument("pulse template: period must be positive");
    if (!(systolic_time_frac > 0.0 && diastolic_time_frac < 1.0 &&
          systolic_time_frac < diastolic_time_frac))
        throw std::invalid_argument("pulse template: need 0 < systolic_time_frac < diastolic_time_frac < 1");
    if (!(systolic_amp > diastolic_amp && diastolic_amp > 0.0))
        throw std::invalid_argument("pulse template: need systolic_amp > diastolic_amp > 0");
    if (!(notch_depth_frac >= 0.0 && notch_depth_frac < 1.0))
        throw std::invalid_argument("pulse template: notch_depth_frac must be in [0,1)");
    if (notch_value() < 0.0)
        throw std::invalid_argument("pulse template: notch would cut below the onset level");
}

std::vector<double> render_pulse(const PulseTemplate& tpl, double sample_rate) {
    tpl.validate();
    if (!(sample_rate > 0.0) || sample_rate * tpl.period < 20.0)
        throw std::invalid_argument("render_pulse: need at least 20 samples per period");
    const auto n = static_cast<std::size_t>(std::lround(tpl.period * sample_rate));
    std::vector<double> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        out[i] = pulse_value(tpl, static_cast<double>(i) / sample_rate);
    out.front() = 0.0;
    out.back() = 0.0;
    return out;
}

void ScenarioSpec::validate(double pulse_period) const {
    if (!(sample_rate > 0.0))
        throw std::invalid_argument("scenario: sample_rate must be positive");
    if (!(duration >= pulse_period))
        throw std::invalid_argument("scenario: duration shorter than one pulse period");
    for (double amp : {transient_gain, artifact_amp, wander_amp, noise_sigma, dc_level})
        if (!(amp >= 0.0) || !std::isfinite(amp))
            throw std::invalid_argument("scenario: amplitudes must be finite and non-negative");
    if (class_label != Label::Stationary) {
        if (!(movement_onset >= 0.0 && movement_onset + recovery_time <= duration))
            throw std::invalid_argument("scenario: movement_onset + recovery_time must fit in duration");
    }
}

ScenarioSpec ScenarioSpec::for_class(Label label, std::uint64_t seed) {
    ScenarioSpec spec;
    spec.class_label = label;
    spec.seed = seed;
    switch (label) {
        case Label::Stationary:
            spec.transient_gain = 0.0;
            spec.artifact_amp = 0.0;
            break;
        case Label::SitToStand:
            spec.transient_gain = 429.7;
            spec.artifact_amp = 60.0;
            break;
        case Label::LieToStand:
            spec.transient_gain = 1100.7;
            spec.artifact_amp = 120.0;
            break;
    }
    return spec;
}

std::pair<Recording, GroundTruth> generate_recording(const ScenarioSpec& spec,
                                                     const PulseTemplate& tpl) {
    tpl.validate();
    spec.validate(tpl.period);

    const double fs = spec.sample_rate;
    const auto n_samples = static_cast<std::size_t>(std::floor(spec.duration * fs)) + 1;

    // Independent engines so landmark jitter does not depend on how many
    // noise samples were drawn.
    std::mt19937_64 jitter_rng(spec.seed * 0x9e3779b97f4a7c15ULL + 1);
    std::mt19937_64 noise_rng(spec.seed * 0x9e3779b97f4a7c15ULL + 2);
    std::mt19937_64 artifact_rng(spec.seed * 0x9e3779b97f4a7c15ULL + 3);
    std::normal_distribution<double> unit_normal(0.0, 1.0);

    // Beat-to-beat variation scales with the configured noise level so that
    // noiseless scenarios stay exactly periodic.
    const double rel = std::min(0.1, spec.noise_sigma / tpl.systolic_amp);
    const double period_jitter = 0.5 * rel;
    const double amp_jitter = 1.0 * rel;

    struct Beat {
        double start;
        double period_scale;
        double amp_scale;
    };
    std::vector<Beat> beats;
    double cursor = -kLeadInPhase * tpl.period;  // partial beat opens the recording
    while (cursor < spec.duration) {
        double pj = std::clamp(unit_normal(jitter_rng) * period_jitter, -0.2, 0.2);
        double aj = std::clamp(unit_normal(jitter_rng) * amp_jitter, -0.3, 0.3);
        beats.push_back({cursor, 1.0 + pj, 1.0 + aj});
        cursor += tpl.period * (1.0 + pj);
    }
    if (beats.size() < 2)
        throw std::invalid_argument("scenario: duration shorter than one pulse period");

    GroundTruth truth;
    truth.class_label = spec.class_label;
    for (std::size_t k = 1; k < beats.size(); ++k) {
        const Beat& b = beats[k];
        truth.onset_times.push_back(b.start);
        // Landmarks only for beats that fit inside the recording.
        if (b.start + tpl.period * b.period_scale <= spec.duration + 1e-12) {
            truth.systolic_times.push_back(b.start + tpl.systolic_time() * b.period_scale);
            truth.notch_times.push_back(b.start + tpl.notch_time() * b.period_scale);
            truth.diastolic_times.push_back(b.start + tpl.diastolic_time() * b.period_scale);
        }
    }

    // Orthostatic transient: 2 s linear rise to transient_gain, then an
    // exponential return with time constant recovery_time/3.
    const bool moving = spec.class_label != Label::Stationary && spec.transient_gain > 0.0;
    const double rise = 2.0;
    const double tau = std::max(1e-6, spec.recovery_time / 3.0);
    const auto transient = [&](double t) -> std::pair<double, double> {  // value, slope
        if (!moving || t < spec.movement_onset) return {0.0, 0.0};
        const double dt = t - spec.movement_onset;
        if (dt < rise) return {spec.transient_gain * dt / rise, spec.transient_gain / rise};
        const double v = spec.transient_gain * std::exp(-(dt - rise) / tau);
        return {v, -v / tau};
    };

    std::vector<double> samples(n_samples, 0.0);
    std::size_t beat_idx = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t = static_cast<double>(i) / fs;
        while (beat_idx + 1 < beats.size() && t >= beats[beat_idx + 1].start) ++beat_idx;
        const Beat& b = beats[beat_idx];
        const double local = (t - b.start) / b.period_scale;
        double v = 0.0;
        if (local >= 0.0 && local <= tpl.period) v = b.amp_scale * pulse_value(tpl, local);

        const auto [bump, slope] = transient(t);
        const double dip =
            std::min(kAmpDipMax, kAmpDipPerSlope * std::abs(slope) / tpl.systolic_amp);
        samples[i] = v * (1.0 - dip) + bump +
                     spec.wander_amp * std::sin(2.0 * kPi * spec.wander_freq * t);
        if (spec.noise_sigma > 0.0) samples[i] += spec.noise_sigma * unit_normal(noise_rng);
    }

    // Motion-artifact burst: band-limited noise during the first 2 s of the
    // movement, cosine-tapered at both ends.
    if (spec.class_label != Label::Stationary && spec.artifact_amp > 0.0) {
        const auto i0 = static_cast<std::size_t>(std::lround(spec.movement_onset * fs));
        const auto i1 = std::min(n_samples, i0 + static_cast<std::size_t>(std::lround(2.0 * fs)));
        const std::size_t len = (i1 > i0) ? i1 - i0 : 0;
        const double f_lo = 3.0 / fs;
        const double f_hi = std::min(12.0 / fs, 0.45);
        if (len >= 3 * signal::bandpass_impulse_length(f_lo) && f_lo < f_hi) {
            std::vector<double> burst(len);
            for (auto& x : burst) x = unit_normal(artifact_rng);
            burst = signal::bandpass(burst, f_lo, f_hi);
            double ss = 0.0;
            for (double x : burst) ss += x * x;
            const double rms = std::sqrt(ss / static_cast<double>(len));
            const double gain = rms > 0.0 ? spec.artifact_amp / rms : 0.0;
            const auto ramp = static_cast<std::size_t>(std::lround(0.2 * fs));
            for (std::size_t j = 0; j < len; ++j) {
                double w = 1.0;
                if (j < ramp) w = 0.5 * (1.0 - std::cos(kPi * static_cast<double>(j) / ramp));
                if (len - 1 - j < ramp)
                    w = std::min(w, 0.5 * (1.0 - std::cos(kPi * static_cast<double>(len - 1 - j) / ramp)));
                samples[i0 + j] += gain * w * burst[j];
            }
        }
    }

    Recording rec;
    rec.sample_rate = fs;
    rec.label = spec.class_label;
    rec.source_id = "synth-" + to_string(spec.class_label) + "-seed" + std::to_string(spec.seed);
    rec.time_s.resize(n_samples);
    rec.value.resize(n_samples);
    constexpr double kMaxValue = 2147483646.0;  // 2^31 - 2
    for (std::size_t i = 0; i < n_samples; ++i) {
        rec.time_s[i] = static_cast<double>(i) / fs;
        rec.value[i] = std::clamp(std::round(spec.dc_level + samples[i]), 0.0, kMaxValue);
    }
    return {std::move(rec), std::move(truth)};
}

}  // namespace ppg::synth
