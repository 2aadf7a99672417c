// Python bindings for the core operations: synthesis, preprocessing,
// segmentation, POI, features, classification and the wire codec.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ppgmotion/features.hpp"
#include "ppgmotion/pipeline.hpp"
#include "ppgmotion/poi.hpp"
#include "ppgmotion/segment.hpp"
#include "ppgmotion/signal.hpp"
#include "ppgmotion/synth.hpp"
#include "ppgmotion/wire.hpp"

namespace py = pybind11;
using namespace ppg;

namespace {

py::dict poi_to_dict(const PointsOfInterest& p) {
    py::dict d;
    auto landmark = [](const Landmark& lm) {
        py::dict out;
        out["t"] = lm.t;
        out["m"] = lm.m;
        return out;
    };
    d["onset"] = landmark(p.onset);
    d["end"] = landmark(p.end);
    d["systolic"] = landmark(p.systolic);
    d["dicrotic"] = p.dicrotic ? py::object(landmark(*p.dicrotic)) : py::none();
    d["diastolic"] = p.diastolic ? py::object(landmark(*p.diastolic)) : py::none();
    d["diastolic_fallback_used"] = p.diastolic_fallback_used;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "PPG postural-movement recognition core";

    py::enum_<Label>(m, "Label")
        .value("STATIONARY", Label::Stationary)
        .value("SIT_TO_STAND", Label::SitToStand)
        .value("LIE_TO_STAND", Label::LieToStand);

    py::class_<synth::PulseTemplate>(m, "PulseTemplate")
        .def(py::init<>())
        .def_readwrite("period", &synth::PulseTemplate::period)
        .def_readwrite("systolic_amp", &synth::PulseTemplate::systolic_amp)
        .def_readwrite("systolic_time_frac", &synth::PulseTemplate::systolic_time_frac)
        .def_readwrite("diastolic_amp", &synth::PulseTemplate::diastolic_amp)
        .def_readwrite("diastolic_time_frac", &synth::PulseTemplate::diastolic_time_frac)
        .def_readwrite("notch_depth_frac", &synth::PulseTemplate::notch_depth_frac)
        .def("systolic_time", &synth::PulseTemplate::systolic_time)
        .def("notch_time", &synth::PulseTemplate::notch_time)
        .def("diastolic_time", &synth::PulseTemplate::diastolic_time);

    py::class_<synth::ScenarioSpec>(m, "ScenarioSpec")
        .def(py::init<>())
        .def_static("for_class", &synth::ScenarioSpec::for_class, py::arg("label"),
                    py::arg("seed"))
        .def_readwrite("class_label", &synth::ScenarioSpec::class_label)
        .def_readwrite("duration", &synth::ScenarioSpec::duration)
        .def_readwrite("movement_onset", &synth::ScenarioSpec::movement_onset)
        .def_readwrite("recovery_time", &synth::ScenarioSpec::recovery_time)
        .def_readwrite("transient_gain", &synth::ScenarioSpec::transient_gain)
        .def_readwrite("artifact_amp", &synth::ScenarioSpec::artifact_amp)
        .def_readwrite("wander_amp", &synth::ScenarioSpec::wander_amp)
        .def_readwrite("wander_freq", &synth::ScenarioSpec::wander_freq)
        .def_readwrite("noise_sigma", &synth::ScenarioSpec::noise_sigma)
        .def_readwrite("dc_level", &synth::ScenarioSpec::dc_level)
        .def_readwrite("sample_rate", &synth::ScenarioSpec::sample_rate)
        .def_readwrite("seed", &synth::ScenarioSpec::seed);

    py::class_<synth::GroundTruth>(m, "GroundTruth")
        .def_readonly("onset_times", &synth::GroundTruth::onset_times)
        .def_readonly("systolic_times", &synth::GroundTruth::systolic_times)
        .def_readonly("notch_times", &synth::GroundTruth::notch_times)
        .def_readonly("diastolic_times", &synth::GroundTruth::diastolic_times)
        .def_readonly("class_label", &synth::GroundTruth::class_label);

    py::class_<Recording>(m, "Recording")
        .def_readonly("time_s", &Recording::time_s)
        .def_readonly("value", &Recording::value)
        .def_readonly("sample_rate", &Recording::sample_rate)
        .def_readonly("label", &Recording::label)
        .def_readonly("source_id", &Recording::source_id);

    m.def("render_pulse", &synth::render_pulse, py::arg("template"), py::arg("sample_rate"));
    m.def("generate_recording",
          [](const synth::ScenarioSpec& spec, const synth::PulseTemplate& tpl) {
              return synth::generate_recording(spec, tpl);
          },
          py::arg("spec"), py::arg("template") = synth::PulseTemplate{});

    m.def("detrend", &signal::detrend, py::arg("series"));
    m.def("bandpass", &signal::bandpass, py::arg("series"),
          py::arg("f_lo") = signal::kDefaultBandLow, py::arg("f_hi") = signal::kDefaultBandHigh);
    m.def("moving_average_baseline", &segment::moving_average_baseline, py::arg("series"),
          py::arg("window"));

    m.def(
        "estimate_period",
        [](const std::vector<double>& filtered, double fs) {
            const auto est = segment::estimate_period(filtered, fs);
            return py::make_tuple(est.lag, est.low_confidence);
        },
        py::arg("filtered"), py::arg("sample_rate"),
        "Returns (lag_samples, low_confidence).");

    m.def(
        "detect_onsets",
        [](const std::vector<double>& filtered, double fs) {
            const auto result = segment::detect_onsets(filtered, fs);
            py::dict d;
            d["indices"] = result.indices;
            d["period"] = result.period;
            d["low_confidence_period"] = result.low_confidence_period;
            d["baseline"] = result.baseline;
            return d;
        },
        py::arg("filtered"), py::arg("sample_rate"));

    m.def(
        "process_recording",
        [](const Recording& rec, double f_lo, double f_hi) {
            pipeline::ProcessOptions opts;
            opts.f_lo = f_lo;
            opts.f_hi = f_hi;
            const auto processed = pipeline::process_recording(rec, opts, rec.source_id);
            py::list pulses;
            for (std::size_t k = 0; k < processed.pois.size(); ++k) {
                py::dict d;
                d["index"] = k;
                d["start_time"] = processed.pulses[k].start_time;
                d["end_time"] = processed.pulses[k].end_time;
                d["filtered"] = poi_to_dict(processed.pois[k].filtered);
                d["raw"] = poi_to_dict(processed.pois[k].raw);
                d["detrended"] = poi_to_dict(processed.pois[k].detrended);
                pulses.append(d);
            }
            return pulses;
        },
        py::arg("recording"), py::arg("f_lo") = signal::kDefaultBandLow,
        py::arg("f_hi") = signal::kDefaultBandHigh,
        "Segment a recording and return per-pulse landmarks for all views.");

    m.def(
        "extract_feature_matrix",
        [](const Recording& rec, double stationary_window, double movement_onset,
           double label_window) {
            const auto processed = pipeline::process_recording(rec, {}, rec.source_id);
            auto rows = pipeline::to_pulse_rows(processed);
            pipeline::FeatureOptions opts;
            opts.stationary_window = stationary_window;
            opts.movement_onset = movement_onset;
            opts.label_window = label_window;
            const auto fv = pipeline::features_from_rows(rows, opts, nullptr);
            py::list names;
            for (const auto* n : features::kFeatureNames) names.append(std::string(n));
            py::list matrix;
            py::list labels;
            for (const auto& row : fv) {
                matrix.append(std::vector<double>(row.values.begin(), row.values.end()));
                labels.append(row.label);
            }
            py::dict d;
            d["feature_names"] = names;
            d["rows"] = matrix;
            d["labels"] = labels;
            return d;
        },
        py::arg("recording"), py::arg("stationary_window") = 20.0,
        py::arg("movement_onset") = 30.0, py::arg("label_window") = 10.0);

    m.def(
        "chi_squared_scores",
        [](const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
           const std::vector<std::string>& names) {
            std::vector<features::RankEntry> ranking;
            std::vector<double> column(rows.size());
            for (std::size_t f = 0; f < names.size(); ++f) {
                for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i][f];
                ranking.push_back(
                    {names[f], features::chi_squared_stat(column, labels, kNumClasses)});
            }
            std::stable_sort(ranking.begin(), ranking.end(),
                             [](const auto& a, const auto& b) { return a.score > b.score; });
            py::list out;
            for (const auto& r : ranking) out.append(py::make_tuple(r.name, r.score));
            return out;
        },
        py::arg("rows"), py::arg("labels"), py::arg("feature_names"));

    py::class_<ml::ModelReport>(m, "ModelReport")
        .def_readonly("model", &ml::ModelReport::model)
        .def_readonly("ok", &ml::ModelReport::ok)
        .def_readonly("error", &ml::ModelReport::error)
        .def_readonly("validation_accuracy", &ml::ModelReport::validation_accuracy)
        .def_readonly("test_accuracy", &ml::ModelReport::test_accuracy)
        .def("f1_scores", [](const ml::ModelReport& r) {
            std::vector<double> f1;
            for (const auto& c : r.per_class) f1.push_back(c.f1);
            return f1;
        });

    m.def(
        "benchmark",
        [](const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
           const std::vector<std::string>& models, std::uint64_t seed) {
            ml::Dataset data;
            data.x = rows;
            data.y = labels;
            std::vector<ml::ModelSpec> presets;
            if (models.empty()) {
                presets = ml::default_presets();
            } else {
                for (const auto& name : models) presets.push_back(ml::preset_by_name(name));
            }
            return ml::benchmark_grid(data, presets, seed);
        },
        py::arg("rows"), py::arg("labels"), py::arg("models") = std::vector<std::string>{},
        py::arg("seed") = 1,
        "Stratified split, 10-fold cross-validation and held-out evaluation per preset.");

    m.def("model_presets", [] {
        std::vector<std::string> names;
        for (const auto& spec : ml::default_presets()) names.push_back(spec.name);
        return names;
    });

    m.def(
        "wire_encode",
        [](bool is_time, std::uint32_t value) {
            return py::bytes(wire::encode(
                {is_time ? wire::RecordKind::Time : wire::RecordKind::Sensor, value}));
        },
        py::arg("is_time"), py::arg("value"));

    m.def(
        "wire_decode",
        [](const py::bytes& data) {
            wire::StreamDecoder decoder;
            const std::string bytes = data;
            py::list records;
            for (const auto& r : decoder.push(bytes))
                records.append(py::make_tuple(r.kind == wire::RecordKind::Time, r.value));
            return py::make_tuple(records, decoder.malformed_count());
        },
        py::arg("data"), "Returns ([(is_time, value), ...], malformed_count).");

    m.def("feature_names", [] {
        std::vector<std::string> names;
        for (const auto* n : features::kFeatureNames) names.push_back(n);
        return names;
    });
}
