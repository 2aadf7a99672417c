#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "ppgmotion/pipeline.hpp"
#include "ppgmotion/segment.hpp"
#include "ppgmotion/signal.hpp"
#include "ppgmotion/synth.hpp"

using namespace ppg;

namespace {

constexpr double kPi = std::numbers::pi;

// O(n*w) reference for the centered, symmetrically shrinking mean.
std::vector<double> brute_centered_mean(const std::vector<double>& v, std::size_t window) {
    const std::size_t half = (window - 1) / 2;
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t k = std::min({half, i, v.size() - 1 - i});
        double sum = 0.0;
        for (std::size_t j = i - k; j <= i + k; ++j) sum += v[j];
        out[i] = sum / static_cast<double>(2 * k + 1);
    }
    return out;
}

// Direct autocorrelation argmax over the 0.5..2.0 s lag range.
std::size_t brute_acf_peak(const std::vector<double>& v, double fs) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    auto acf = [&](std::size_t lag) {
        double r = 0.0;
        for (std::size_t i = 0; i + lag < v.size(); ++i)
            r += (v[i] - mean) * (v[i + lag] - mean);
        return r;
    };
    const auto lo = static_cast<std::size_t>(std::lround(0.5 * fs));
    const auto hi = static_cast<std::size_t>(std::lround(2.0 * fs));
    std::size_t best = lo;
    for (std::size_t lag = lo; lag <= hi && lag + 1 < v.size(); ++lag)
        if (acf(lag) > acf(best)) best = lag;
    return best;
}

std::pair<Recording, synth::GroundTruth> noise_free_recording(double duration, Label label,
                                                              std::uint64_t seed) {
    auto spec = synth::ScenarioSpec::for_class(label, seed);
    spec.duration = duration;
    spec.noise_sigma = 0.0;
    return synth::generate_recording(spec);
}

bool near_any(const std::vector<double>& times, double t, double tol) {
    for (double g : times)
        if (std::abs(g - t) <= tol) return true;
    return false;
}

}  // namespace

TEST_CASE("moving average: constant series unchanged") {
    const std::vector<double> v(64, 3.25);
    const auto out = segment::moving_average_baseline(v, 7);
    for (double x : out) CHECK(x == doctest::Approx(3.25));
}

TEST_CASE("moving average: window 3 hand case") {
    const auto out = segment::moving_average_baseline({0.0, 3.0, 0.0}, 3);
    CHECK(out[1] == doctest::Approx(1.0));
}

TEST_CASE("moving average matches the brute-force oracle") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<double> v(257);
    for (auto& x : v) x = n01(rng);
    for (std::size_t window : {3u, 9u, 51u, 257u}) {
        const auto fast = segment::moving_average_baseline(v, window);
        const auto slow = brute_centered_mean(v, window);
        for (std::size_t i = 0; i < v.size(); ++i)
            CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-9));
    }
}

TEST_CASE("moving average rejects even or out-of-range windows") {
    const std::vector<double> v(10, 1.0);
    CHECK_THROWS(segment::moving_average_baseline(v, 4));
    CHECK_THROWS(segment::moving_average_baseline(v, 1));
    CHECK_THROWS(segment::moving_average_baseline(v, 11));
}

TEST_CASE("local minima: strict dips and leftmost plateau samples") {
    CHECK(segment::local_minima({3, 1, 3, 2, 2, 2, 5, 4}) == std::vector<std::size_t>{1, 3});
    CHECK(segment::local_minima({1, 1, 1}) == std::vector<std::size_t>{});
    CHECK(segment::local_minima({2, 1, 1}) == std::vector<std::size_t>{});  // unbounded plateau
}

TEST_CASE("estimate_period: 1.2 Hz sinusoid at 100 Hz") {
    std::vector<double> v(1500);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = std::sin(2.0 * kPi * 1.2 * static_cast<double>(i) / 100.0);
    const auto est = segment::estimate_period(v, 100.0);
    CHECK(!est.low_confidence);
    CHECK(std::abs(static_cast<long>(est.lag) - 83L) <= 1);
    CHECK(est.lag == brute_acf_peak(v, 100.0));
}

TEST_CASE("estimate_period: synthetic recording with 0.8 s period") {
    synth::PulseTemplate tpl;
    tpl.period = 0.8;
    auto spec = synth::ScenarioSpec::for_class(Label::Stationary, 6);
    const auto [rec, truth] = synth::generate_recording(spec, tpl);
    const auto views = signal::make_views(rec);
    const auto est = segment::estimate_period(views.filtered, rec.sample_rate);
    CHECK(!est.low_confidence);
    CHECK(std::abs(static_cast<long>(est.lag) - 80L) <= 2);
}

TEST_CASE("estimate_period: white noise falls back with a flag") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<double> v(2000);
    for (auto& x : v) x = n01(rng);
    const auto est = segment::estimate_period(v, 100.0);
    CHECK(est.low_confidence);
    CHECK(est.lag == 100);
}

TEST_CASE("estimate_period requires at least 3 seconds") {
    CHECK_THROWS(segment::estimate_period(std::vector<double>(250, 0.0), 100.0));
}

TEST_CASE("detect_onsets: noise-free synthetic recording, one onset per junction") {
    // 31 beats fit into 18 s at the default 0.6 s period -> 30 junctions.
    const auto [rec, truth] = noise_free_recording(18.0, Label::Stationary, 21);
    REQUIRE(truth.onset_times.size() == 30);
    const auto views = signal::make_views(rec);
    const auto result = segment::detect_onsets(views.filtered, rec.sample_rate);
    CHECK(result.indices.size() == 30);
    for (std::size_t idx : result.indices)
        CHECK(near_any(truth.onset_times, rec.time_s[idx], 0.030));
}

TEST_CASE("detect_onsets: notches stay out of the onset list") {
    synth::PulseTemplate tpl;
    tpl.notch_depth_frac = 0.05;  // shallow notch, well above the baseline
    auto spec = synth::ScenarioSpec::for_class(Label::Stationary, 23);
    spec.duration = 30.0;
    const auto [rec, truth] = synth::generate_recording(spec, tpl);
    const auto views = signal::make_views(rec);
    const auto result = segment::detect_onsets(views.filtered, rec.sample_rate);
    CHECK(result.indices.size() >= 45);
    for (std::size_t idx : result.indices)
        CHECK(!near_any(truth.notch_times, rec.time_s[idx], 0.030));
}

TEST_CASE("detect_onsets: constant series yields an explicit empty result") {
    const std::vector<double> flat(1000, 2.0);
    const auto result = segment::detect_onsets(flat, 100.0);
    CHECK(result.indices.empty());
    CHECK(result.low_confidence_period);
    CHECK(result.candidates == 0);
}

TEST_CASE("detect_onsets invariants: spacing and below-baseline") {
    const auto [rec, truth] = noise_free_recording(40.0, Label::SitToStand, 29);
    const auto views = signal::make_views(rec);
    const auto result = segment::detect_onsets(views.filtered, rec.sample_rate);
    REQUIRE(result.indices.size() >= 2);
    for (std::size_t i = 0; i < result.indices.size(); ++i) {
        const std::size_t idx = result.indices[i];
        CHECK(views.filtered[idx] < result.baseline[idx]);
        if (i > 0)
            CHECK(static_cast<double>(idx - result.indices[i - 1]) >
                  static_cast<double>(result.period) / 2.0);
    }
}

TEST_CASE("slice_pulses: hand-counted windows") {
    SignalViews views;
    for (std::size_t i = 0; i < 300; ++i) {
        views.time_s.push_back(0.01 * static_cast<double>(i));
        views.raw.push_back(static_cast<double>(i));
        views.detrended.push_back(static_cast<double>(i) * 2.0);
        views.filtered.push_back(static_cast<double>(i) * 3.0);
    }
    const auto pulses = segment::slice_pulses(views, {0, 100, 200}, 100.0);
    REQUIRE(pulses.size() == 2);
    CHECK(pulses[0].raw.size() == 101);
    CHECK(pulses[1].raw.size() == 101);
    CHECK(pulses[0].raw.front() == 0.0);
    CHECK(pulses[0].raw.back() == 100.0);
    CHECK(pulses[1].start_time == doctest::Approx(1.0));
    CHECK(pulses[0].detrended.back() == 200.0);
    CHECK(pulses[0].filtered.back() == 300.0);
}

TEST_CASE("slice_pulses: N onsets produce N-1 pulses covering the span") {
    const auto [rec, truth] = noise_free_recording(18.0, Label::Stationary, 33);
    const auto views = signal::make_views(rec);
    const auto result = segment::detect_onsets(views.filtered, rec.sample_rate);
    const auto pulses = segment::slice_pulses(views, result.indices, rec.sample_rate);
    CHECK(pulses.size() == result.indices.size() - 1);
    // coverage: consecutive pulses share exactly the boundary sample
    for (std::size_t k = 1; k < pulses.size(); ++k)
        CHECK(pulses[k].start_time == doctest::Approx(pulses[k - 1].end_time));
    // every pulse boundary sits below the baseline
    for (std::size_t k = 0; k < pulses.size(); ++k) {
        const std::size_t a = result.indices[k];
        const std::size_t b = result.indices[k + 1];
        CHECK(views.filtered[a] < result.baseline[a]);
        CHECK(views.filtered[b] < result.baseline[b]);
    }
}

TEST_CASE("slice_pulses rejects bad onset lists") {
    SignalViews views;
    for (std::size_t i = 0; i < 50; ++i) {
        views.time_s.push_back(static_cast<double>(i));
        views.raw.push_back(0.0);
        views.detrended.push_back(0.0);
        views.filtered.push_back(0.0);
    }
    CHECK_THROWS(segment::slice_pulses(views, {5}, 1.0));
    CHECK_THROWS(segment::slice_pulses(views, {5, 5}, 1.0));
    CHECK_THROWS(segment::slice_pulses(views, {9, 3}, 1.0));
    CHECK_THROWS(segment::slice_pulses(views, {3, 60}, 1.0));
}

TEST_CASE("segmentation recall on noisy recordings") {
    // noise at 2% of the systolic amplitude, as in the acceptance corpus
    std::size_t total = 0, matched = 0;
    for (std::uint64_t seed = 60; seed < 64; ++seed) {
        auto spec = synth::ScenarioSpec::for_class(Label::LieToStand, seed);
        spec.noise_sigma = 80.0;
        const auto [rec, truth] = synth::generate_recording(spec);
        const auto views = signal::make_views(rec);
        const auto result = segment::detect_onsets(views.filtered, rec.sample_rate);
        std::vector<double> detected;
        for (std::size_t idx : result.indices) detected.push_back(rec.time_s[idx]);
        for (double g : truth.onset_times) {
            ++total;
            if (near_any(detected, g, 0.030)) ++matched;
        }
    }
    CHECK(static_cast<double>(matched) >= 0.95 * static_cast<double>(total));
}
