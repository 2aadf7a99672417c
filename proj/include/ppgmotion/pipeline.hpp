#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppgmotion/classify.hpp"
#include "ppgmotion/features.hpp"
#include "ppgmotion/io.hpp"
#include "ppgmotion/poi.hpp"
#include "ppgmotion/segment.hpp"
#include "ppgmotion/signal.hpp"
#include "ppgmotion/synth.hpp"
#include "ppgmotion/types.hpp"

namespace ppg::pipeline {

struct ProcessOptions {
    double f_lo = signal::kDefaultBandLow;
    double f_hi = signal::kDefaultBandHigh;
    double outlier_lo = signal::kDefaultOutlierLo;
    double outlier_hi = signal::kDefaultOutlierHi;
    std::string onsets_out;  // optional CSV with detected onsets + baseline
};

struct ProcessedRecording {
    std::string name;
    Label label = Label::Stationary;
    SignalViews views;
    segment::OnsetResult onsets;
    std::vector<Pulse> pulses;
    std::vector<poi::PulsePoi> pois;
};

// Clean -> segment -> locate POI. Throws when the recording is unusable
// (too short, no onsets, over-aggressive outlier removal).
ProcessedRecording process_recording(const Recording& rec, const ProcessOptions& opts,
                                     const std::string& name);

std::vector<io::PulseRow> to_pulse_rows(const ProcessedRecording& processed);

struct FeatureOptions {
    double stationary_window = 20.0;  // seconds of assumed-stationary baseline
    double movement_onset = 30.0;     // protocol movement time
    double label_window = 10.0;       // pulses starting here carry the movement label
};

// Builds feature vectors from pulse rows grouped by recording; recordings
// without a usable stationary baseline are skipped and reported.
std::vector<features::FeatureVector> features_from_rows(const std::vector<io::PulseRow>& rows,
                                                        const FeatureOptions& opts,
                                                        std::vector<std::string>* skipped);

// Landmark-arithmetic core shared with features::extract_features.
features::FeatureVector features_from_poi(const poi::PulsePoi& poi,
                                          const features::OrthostaticBaseline& baseline,
                                          std::size_t pulse_index);

ml::Dataset dataset_from_features(const std::vector<features::FeatureVector>& rows,
                                  const std::vector<bool>& mask);

struct TrainOptions {
    std::vector<std::string> models;  // empty = all presets
    std::vector<std::string> drop = {"dicrotic_magnitude"};
    std::uint64_t seed = 1;
    std::vector<std::pair<std::string, std::string>> config;  // key=value overrides
};

std::vector<ml::ModelReport> train_stage(const std::vector<features::FeatureVector>& rows,
                                         const TrainOptions& opts);

void apply_config(ml::ModelSpec& spec, const std::vector<std::pair<std::string, std::string>>& config);

}  // namespace ppg::pipeline
