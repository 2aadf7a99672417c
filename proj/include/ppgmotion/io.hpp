#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ppgmotion/classify.hpp"
#include "ppgmotion/features.hpp"
#include "ppgmotion/synth.hpp"
#include "ppgmotion/types.hpp"

namespace ppg::io {

struct RecordingMeta {
    std::string source_id;
    double sample_rate = 100.0;
    Label label = Label::Stationary;
    double duration_s = 0.0;
    std::size_t record_count = 0;
    std::size_t malformed_count = 0;
    bool truncated = false;
};

void write_recording_csv(const std::string& path, const Recording& rec);
void write_recording_meta(const std::string& path, const RecordingMeta& meta);
Recording read_recording(const std::string& csv_path, const std::string& meta_path);

void write_ground_truth(const std::string& path, const synth::GroundTruth& truth);
synth::GroundTruth read_ground_truth(const std::string& path);

// One row per segmented pulse; landmark times are shared across views
// (located on the filtered view), magnitudes are per view.
struct PulseRow {
    std::string recording;
    Label label = Label::Stationary;
    std::size_t pulse_index = 0;  // per-recording ordinal
    double onset_t = 0, end_t = 0, sys_t = 0, dic_t = 0, dia_t = 0;
    bool dia_found = false, dic_found = false, dia_fallback = false;
    double fil_onset_m = 0, fil_end_m = 0, fil_sys_m = 0, fil_dic_m = 0, fil_dia_m = 0;
    double raw_onset_m = 0, raw_end_m = 0, raw_sys_m = 0, raw_dic_m = 0, raw_dia_m = 0;
    double det_onset_m = 0, det_end_m = 0, det_sys_m = 0, det_dic_m = 0, det_dia_m = 0;
};

void write_pulse_rows(const std::string& path, const std::vector<PulseRow>& rows);
std::vector<PulseRow> read_pulse_rows(const std::string& path);

// Feature matrix: the 21 feature columns, then label, pulse_index, quality_flag.
void write_feature_csv(const std::string& path, const std::vector<features::FeatureVector>& rows);
std::vector<features::FeatureVector> read_feature_csv(const std::string& path);

void write_ranking_csv(const std::string& path, const std::vector<features::RankEntry>& ranking);
std::vector<features::RankEntry> read_ranking_csv(const std::string& path);

void write_reports_csv(const std::string& path, const std::vector<ml::ModelReport>& reports);
std::vector<ml::ModelReport> read_reports_csv(const std::string& path);

// Exported intermediates for plotting: onset indices and the baseline.
void write_onsets_csv(const std::string& path, const std::vector<std::size_t>& onsets,
                      const std::vector<double>& baseline, const std::vector<double>& filtered,
                      double sample_rate);

// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path);

std::string format_double(double v);  // stable shortest-ish formatting for CSV output

}  // namespace ppg::io
