#include "ppgmotion/pipeline.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "ppgmotion/signal.hpp"

namespace ppg::pipeline {

ProcessedRecording process_recording(const Recording& rec, const ProcessOptions& opts,
                                     const std::string& name) {
    rec.validate();
    const auto cleaned = signal::remove_outliers(rec, opts.outlier_lo, opts.outlier_hi);

    ProcessedRecording out;
    out.name = name;
    out.label = rec.label;
    out.views = signal::make_views(cleaned.recording, opts.f_lo, opts.f_hi);
    out.onsets = segment::detect_onsets(out.views.filtered, rec.sample_rate);
    if (out.onsets.indices.size() < 2)
        throw std::runtime_error(name + ": fewer than 2 onsets detected");
    out.pulses = segment::slice_pulses(out.views, out.onsets.indices, rec.sample_rate);
    out.pois.reserve(out.pulses.size());
    for (const auto& pulse : out.pulses) out.pois.push_back(poi::locate(pulse));
    if (!opts.onsets_out.empty())
        io::write_onsets_csv(opts.onsets_out, out.onsets.indices, out.onsets.baseline,
                             out.views.filtered, rec.sample_rate);
    return out;
}

std::vector<io::PulseRow> to_pulse_rows(const ProcessedRecording& processed) {
    std::vector<io::PulseRow> rows;
    rows.reserve(processed.pois.size());
    for (std::size_t k = 0; k < processed.pois.size(); ++k) {
        const auto& poi = processed.pois[k];
        io::PulseRow r;
        r.recording = processed.name;
        r.label = processed.label;
        r.pulse_index = k;
        r.onset_t = poi.filtered.onset.t;
        r.end_t = poi.filtered.end.t;
        r.sys_t = poi.filtered.systolic.t;
        r.dia_found = poi.filtered.diastolic.has_value();
        r.dic_found = poi.filtered.dicrotic.has_value();
        r.dia_fallback = poi.filtered.diastolic_fallback_used;
        r.dia_t = r.dia_found ? poi.filtered.diastolic->t : 0.0;
        r.dic_t = r.dic_found ? poi.filtered.dicrotic->t : 0.0;

        const auto fill = [&](const PointsOfInterest& p, double& onset_m, double& end_m,
                              double& sys_m, double& dic_m, double& dia_m) {
            onset_m = p.onset.m;
            end_m = p.end.m;
            sys_m = p.systolic.m;
            dic_m = p.dicrotic ? p.dicrotic->m : 0.0;
            dia_m = p.diastolic ? p.diastolic->m : 0.0;
        };
        fill(poi.filtered, r.fil_onset_m, r.fil_end_m, r.fil_sys_m, r.fil_dic_m, r.fil_dia_m);
        fill(poi.raw, r.raw_onset_m, r.raw_end_m, r.raw_sys_m, r.raw_dic_m, r.raw_dia_m);
        fill(poi.detrended, r.det_onset_m, r.det_end_m, r.det_sys_m, r.det_dic_m, r.det_dia_m);
        rows.push_back(std::move(r));
    }
    return rows;
}

features::FeatureVector features_from_poi(const poi::PulsePoi& poi,
                                          const features::OrthostaticBaseline& baseline,
                                          std::size_t pulse_index) {
    Pulse shim;
    shim.index = pulse_index;
    return features::extract_features(shim, poi, baseline);
}

namespace {

poi::PulsePoi poi_from_row(const io::PulseRow& r) {
    poi::PulsePoi p;
    const auto fill = [&](PointsOfInterest& view, double onset_m, double end_m, double sys_m,
                          double dic_m, double dia_m) {
        view.onset = {r.onset_t, onset_m};
        view.end = {r.end_t, end_m};
        view.systolic = {r.sys_t, sys_m};
        if (r.dia_found) {
            view.diastolic = Landmark{r.dia_t, dia_m};
            view.diastolic_fallback_used = r.dia_fallback;
        }
        if (r.dic_found) view.dicrotic = Landmark{r.dic_t, dic_m};
    };
    fill(p.filtered, r.fil_onset_m, r.fil_end_m, r.fil_sys_m, r.fil_dic_m, r.fil_dia_m);
    fill(p.raw, r.raw_onset_m, r.raw_end_m, r.raw_sys_m, r.raw_dic_m, r.raw_dia_m);
    fill(p.detrended, r.det_onset_m, r.det_end_m, r.det_sys_m, r.det_dic_m, r.det_dia_m);
    p.diastolic_found = r.dia_found;
    p.dicrotic_found = r.dic_found;
    return p;
}

}  // namespace

std::vector<features::FeatureVector> features_from_rows(const std::vector<io::PulseRow>& rows,
                                                        const FeatureOptions& opts,
                                                        std::vector<std::string>* skipped) {
    // Group rows per recording, preserving input order.
    std::vector<std::string> order;
    std::map<std::string, std::vector<const io::PulseRow*>> groups;
    for (const auto& row : rows) {
        auto& group = groups[row.recording];
        if (group.empty()) order.push_back(row.recording);
        group.push_back(&row);
    }

    std::vector<features::FeatureVector> out;
    std::size_t global_index = 0;
    for (const auto& name : order) {
        const auto& group = groups[name];
        std::vector<Landmark> raw_peaks, det_peaks;
        for (const auto* row : group) {
            raw_peaks.push_back({row->onset_t, row->raw_sys_m});
            det_peaks.push_back({row->onset_t, row->det_sys_m});
        }
        features::OrthostaticBaseline baseline;
        try {
            baseline.raw = features::orthostatic_baseline_value(raw_peaks, opts.stationary_window);
            baseline.detrended =
                features::orthostatic_baseline_value(det_peaks, opts.stationary_window);
        } catch (const std::exception& e) {
            if (skipped) skipped->push_back(name + ": " + e.what());
            continue;
        }
        for (const auto* row : group) {
            auto fv = features_from_poi(poi_from_row(*row), baseline, global_index++);
            const bool in_window = row->onset_t >= opts.movement_onset &&
                                   row->onset_t < opts.movement_onset + opts.label_window;
            fv.label = (in_window && row->label != Label::Stationary) ? row->label
                                                                      : Label::Stationary;
            out.push_back(fv);
        }
    }
    return out;
}

ml::Dataset dataset_from_features(const std::vector<features::FeatureVector>& rows,
                                  const std::vector<bool>& mask) {
    if (mask.size() != features::kFeatureCount)
        throw std::invalid_argument("dataset: mask size mismatch");
    ml::Dataset data;
    for (std::size_t f = 0; f < features::kFeatureCount; ++f)
        if (mask[f]) data.feature_names.emplace_back(features::kFeatureNames[f]);
    data.x.reserve(rows.size());
    data.y.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<double> x;
        x.reserve(data.feature_names.size());
        for (std::size_t f = 0; f < features::kFeatureCount; ++f)
            if (mask[f]) x.push_back(row.values[f]);
        data.x.push_back(std::move(x));
        data.y.push_back(static_cast<int>(row.label));
    }
    return data;
}

void apply_config(ml::ModelSpec& spec,
                  const std::vector<std::pair<std::string, std::string>>& config) {
    for (const auto& [key, value] : config) {
        if (key == "svm_c") spec.svm_c = std::stod(value);
        else if (key == "tree_max_depth") spec.tree_max_depth = std::stoi(value);
        else if (key == "tree_min_leaf") spec.tree_min_leaf = std::stoi(value);
        else if (key == "ann_learning_rate") spec.ann_learning_rate = std::stod(value);
        else if (key == "ann_momentum") spec.ann_momentum = std::stod(value);
        else if (key == "ann_batch") spec.ann_batch = std::stoi(value);
        else if (key == "ann_max_epochs") spec.ann_max_epochs = std::stoi(value);
        else if (key == "ann_patience") spec.ann_patience = std::stoi(value);
        else throw std::invalid_argument("unknown config key: " + key);
    }
}

std::vector<ml::ModelReport> train_stage(const std::vector<features::FeatureVector>& rows,
                                         const TrainOptions& opts) {
    const auto mask = features::select_features(opts.drop);
    const auto data = dataset_from_features(rows, mask);

    std::vector<ml::ModelSpec> presets;
    if (opts.models.empty()) {
        presets = ml::default_presets();
    } else {
        for (const auto& name : opts.models) presets.push_back(ml::preset_by_name(name));
    }
    for (auto& spec : presets) apply_config(spec, opts.config);
    return ml::benchmark_grid(data, presets, opts.seed);
}

}  // namespace ppg::pipeline
