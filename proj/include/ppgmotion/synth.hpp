#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ppgmotion/types.hpp"

namespace ppg::synth {

// Piecewise-cosine pulse model. One period runs onset -> systolic rise ->
// systolic fall -> dicrotic notch -> diastolic lobe -> runout -> plunge back
// to zero, so every landmark location is known analytically.
struct PulseTemplate {
    double period = 0.60;                   // seconds
    double systolic_amp = 4000.0;           // a.u., pulse peak above its onset level
    double systolic_time_frac = 1.0 / 6.0;  // fraction of period, in (0,1)
    double diastolic_amp = 3520.0;          // a.u., local max of the diastolic lobe
    double diastolic_time_frac = 0.60;
    double notch_depth_frac = 0.16;  // notch dip below diastolic_amp, as a fraction of systolic_amp

    double systolic_time() const { return systolic_time_frac * period; }
    double diastolic_time() const { return diastolic_time_frac * period; }
    // The notch sits midway between the systolic and diastolic peaks.
    double notch_time() const { return 0.5 * (systolic_time() + diastolic_time()); }
    double notch_value() const { return diastolic_amp - notch_depth_frac * systolic_amp; }

    void validate() const;
};

// Samples one pulse at the given rate: round(period*fs)+1 samples, value 0 at
// both endpoints, global max systolic_amp at the systolic time, local max
// diastolic_amp at the diastolic time, local min between them.
std::vector<double> render_pulse(const PulseTemplate& tpl, double sample_rate);

struct ScenarioSpec {
    Label class_label = Label::Stationary;
    double duration = 60.0;        // seconds
    double movement_onset = 30.0;  // seconds; ignored for Stationary
    double recovery_time = 10.0;   // seconds; transient decays back within this
    double transient_gain = 0.0;   // a.u., peak additive blood-volume transient
    double artifact_amp = 0.0;     // a.u., std of the motion-artifact burst
    double wander_amp = 140.0;     // a.u., sinusoidal baseline wander amplitude
    double wander_freq = 0.22;     // Hz
    double noise_sigma = 80.0;     // a.u., white noise std
    double dc_level = 50000.0;     // a.u.
    double sample_rate = 100.0;    // Hz
    std::uint64_t seed = 1;

    void validate(double pulse_period) const;

    // Class presets with transient scales calibrated to the reported
    // systolic-peak spreads (stationary ~160, sit-to-stand ~430,
    // lie-to-stand ~1100 a.u.).
    static ScenarioSpec for_class(Label label, std::uint64_t seed);
};

// Construction-time landmark times, in recording seconds.
// onset_times lists interior pulse boundaries (junction minima); the
// per-pulse systolic/notch/diastolic arrays cover every rendered pulse.
struct GroundTruth {
    std::vector<double> onset_times;
    std::vector<double> systolic_times;
    std::vector<double> notch_times;
    std::vector<double> diastolic_times;
    Label class_label = Label::Stationary;
};

// Deterministic for a fixed spec (the seed drives noise, artifact and
// beat-to-beat jitter). Values are quantized to integers and clamped to the
// 31-bit device range.
std::pair<Recording, GroundTruth> generate_recording(const ScenarioSpec& spec,
                                                     const PulseTemplate& tpl = PulseTemplate{});

}  // namespace ppg::synth
