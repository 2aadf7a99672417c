#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "ppgmotion/synth.hpp"

using namespace ppg;
using synth::PulseTemplate;
using synth::ScenarioSpec;

namespace {

// Brute-force strict local maxima of a sampled series.
std::vector<std::size_t> scan_local_maxima(const std::vector<double>& v) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        if (v[i] > v[i - 1] && v[i] > v[i + 1]) out.push_back(i);
    return out;
}

double peak_std(const Recording& rec, const synth::GroundTruth& truth) {
    std::vector<double> peaks;
    for (double t : truth.systolic_times) {
        const auto idx = static_cast<std::size_t>(std::lround(t * rec.sample_rate));
        if (idx < rec.size()) peaks.push_back(rec.value[idx]);
    }
    double mean = 0;
    for (double p : peaks) mean += p;
    mean /= static_cast<double>(peaks.size());
    double var = 0;
    for (double p : peaks) var += (p - mean) * (p - mean);
    return std::sqrt(var / static_cast<double>(peaks.size()));
}

}  // namespace

TEST_CASE("render_pulse: argmax lands at the systolic fraction") {
    PulseTemplate tpl;
    tpl.period = 1.0;
    tpl.systolic_time_frac = 0.25;
    const auto pulse = synth::render_pulse(tpl, 100.0);
    REQUIRE(pulse.size() == 101);
    const auto argmax = std::max_element(pulse.begin(), pulse.end()) - pulse.begin();
    CHECK(std::abs(argmax - 25) <= 1);
    CHECK(pulse[static_cast<std::size_t>(argmax)] == doctest::Approx(tpl.systolic_amp).epsilon(1e-9));
    CHECK(pulse.front() == 0.0);
    CHECK(pulse.back() == 0.0);
}

TEST_CASE("render_pulse: diastolic lobe found by brute-force local-max scan") {
    PulseTemplate tpl;
    tpl.period = 1.0;
    tpl.diastolic_time_frac = 0.6;
    const double fs = 100.0;
    const auto pulse = synth::render_pulse(tpl, fs);
    const auto maxima = scan_local_maxima(pulse);
    bool found = false;
    for (std::size_t idx : maxima) {
        if (std::abs(static_cast<double>(idx) - 0.6 * fs) <= 1.0) {
            found = true;
            CHECK(pulse[idx] == doctest::Approx(tpl.diastolic_amp).epsilon(1e-6));
        }
    }
    CHECK(found);
}

TEST_CASE("render_pulse: notch is a local minimum strictly between the peaks") {
    PulseTemplate tpl;
    const double fs = 100.0;
    const auto pulse = synth::render_pulse(tpl, fs);
    const auto notch_idx = static_cast<std::size_t>(std::lround(tpl.notch_time() * fs));
    CHECK(pulse[notch_idx] < pulse[notch_idx - 1]);
    CHECK(pulse[notch_idx] < pulse[notch_idx + 1]);
    CHECK(notch_idx > static_cast<std::size_t>(tpl.systolic_time() * fs));
    CHECK(notch_idx < static_cast<std::size_t>(tpl.diastolic_time() * fs));
}

TEST_CASE("render_pulse: degenerate single-lobe template has one local maximum") {
    PulseTemplate tpl;
    tpl.notch_depth_frac = 0.0;
    tpl.diastolic_amp = 1e-6 * tpl.systolic_amp;
    const auto pulse = synth::render_pulse(tpl, 100.0);
    CHECK(scan_local_maxima(pulse).size() == 1);
}

TEST_CASE("render_pulse: rejects bad templates and sample rates") {
    PulseTemplate tpl;
    CHECK_THROWS(synth::render_pulse(tpl, 20.0));  // < 20 samples per period
    tpl.systolic_time_frac = 0.7;                  // systolic after diastolic
    CHECK_THROWS(synth::render_pulse(tpl, 100.0));
    tpl = PulseTemplate{};
    tpl.diastolic_amp = tpl.systolic_amp;  // not strictly smaller
    CHECK_THROWS(synth::render_pulse(tpl, 100.0));
    tpl = PulseTemplate{};
    tpl.notch_depth_frac = 1.5;
    CHECK_THROWS(synth::render_pulse(tpl, 100.0));
    tpl = PulseTemplate{};
    tpl.period = std::nan("");
    CHECK_THROWS(synth::render_pulse(tpl, 100.0));
    tpl = PulseTemplate{};
    tpl.diastolic_amp = 0.05 * tpl.systolic_amp;  // notch would cut below zero
    tpl.notch_depth_frac = 0.5;
    CHECK_THROWS(synth::render_pulse(tpl, 100.0));
}

TEST_CASE("generate_recording: clean stationary scenario is exactly periodic") {
    ScenarioSpec spec = ScenarioSpec::for_class(Label::Stationary, 3);
    spec.noise_sigma = 0.0;
    spec.wander_amp = 0.0;
    PulseTemplate tpl;
    const auto [rec, truth] = synth::generate_recording(spec, tpl);
    const double max_value = *std::max_element(rec.value.begin(), rec.value.end());
    CHECK(max_value - spec.dc_level == doctest::Approx(tpl.systolic_amp).epsilon(1e-12));
    CHECK(truth.onset_times.size() > 90);  // ~100 beats per minute
    for (std::size_t i = 1; i < truth.onset_times.size(); ++i)
        CHECK(truth.onset_times[i] > truth.onset_times[i - 1]);
}

TEST_CASE("generate_recording: deterministic for a fixed seed") {
    ScenarioSpec spec = ScenarioSpec::for_class(Label::LieToStand, 99);
    const auto a = synth::generate_recording(spec);
    const auto b = synth::generate_recording(spec);
    CHECK(a.first.value == b.first.value);
    CHECK(a.second.onset_times == b.second.onset_times);
}

TEST_CASE("generate_recording: landmark consistency for noiseless output") {
    ScenarioSpec spec = ScenarioSpec::for_class(Label::SitToStand, 17);
    spec.noise_sigma = 0.0;
    const auto [rec, truth] = synth::generate_recording(spec);
    const auto maxima = scan_local_maxima(rec.value);
    for (double t : truth.systolic_times) {
        const double idx = t * rec.sample_rate;
        bool near = false;
        for (std::size_t m : maxima)
            if (std::abs(static_cast<double>(m) - idx) <= 1.0) near = true;
        CHECK(near);
    }
}

TEST_CASE("generate_recording: class transient scales order the peak spreads") {
    // Transient gains follow the reported per-class systolic-peak spreads;
    // larger postural change -> larger variability.
    const double stat =
        peak_std(synth::generate_recording(ScenarioSpec::for_class(Label::Stationary, 5)).first,
                 synth::generate_recording(ScenarioSpec::for_class(Label::Stationary, 5)).second);
    const auto sit = synth::generate_recording(ScenarioSpec::for_class(Label::SitToStand, 5));
    const auto lie = synth::generate_recording(ScenarioSpec::for_class(Label::LieToStand, 5));
    const double sit_std = peak_std(sit.first, sit.second);
    const double lie_std = peak_std(lie.first, lie.second);
    CHECK(stat < sit_std);
    CHECK(sit_std < lie_std);
}

TEST_CASE("generate_recording: rejects too-short durations") {
    ScenarioSpec spec = ScenarioSpec::for_class(Label::Stationary, 1);
    spec.duration = 0.3;  // shorter than one pulse period
    CHECK_THROWS(synth::generate_recording(spec));
}

TEST_CASE("ground truth landmarks sit inside their pulses") {
    ScenarioSpec spec = ScenarioSpec::for_class(Label::Stationary, 8);
    const auto [rec, truth] = synth::generate_recording(spec);
    REQUIRE(truth.systolic_times.size() == truth.diastolic_times.size());
    REQUIRE(truth.systolic_times.size() == truth.notch_times.size());
    for (std::size_t i = 0; i < truth.systolic_times.size(); ++i) {
        CHECK(truth.systolic_times[i] < truth.notch_times[i]);
        CHECK(truth.notch_times[i] < truth.diastolic_times[i]);
    }
}
