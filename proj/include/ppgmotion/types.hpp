#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ppg {

enum class Label { Stationary = 0, SitToStand = 1, LieToStand = 2 };

inline constexpr std::size_t kNumClasses = 3;

std::string to_string(Label label);
Label label_from_string(const std::string& name);

// One raw recording as persisted by the receiver or the simulator.
// Values are integer sensor units stored as doubles.
struct Recording {
    std::vector<double> time_s;
    std::vector<double> value;
    double sample_rate = 100.0;
    Label label = Label::Stationary;
    std::string source_id;

    std::size_t size() const { return value.size(); }
    void validate() const;  // throws std::invalid_argument on bad invariants
};

// Raw / detrended / filtered versions of one recording, same length,
// shared time base.
struct SignalViews {
    std::vector<double> time_s;
    std::vector<double> raw;
    std::vector<double> detrended;
    std::vector<double> filtered;

    std::size_t size() const { return raw.size(); }
};

// One segmented cardiac cycle. The three views are aligned slices of the
// recording between two consecutive onsets (inclusive span).
struct Pulse {
    double start_time = 0.0;
    double end_time = 0.0;
    std::vector<double> raw;
    std::vector<double> detrended;
    std::vector<double> filtered;
    std::size_t index = 0;
    double sample_rate = 100.0;
};

struct Landmark {
    double t = 0.0;  // seconds, absolute recording time
    double m = 0.0;  // magnitude in the view's units
};

struct PointsOfInterest {
    Landmark onset;
    Landmark end;
    Landmark systolic;
    std::optional<Landmark> dicrotic;
    std::optional<Landmark> diastolic;
    bool diastolic_fallback_used = false;
};

}  // namespace ppg
