#include "ppgmotion/io.hpp"
#include <algorithm>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ppg::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw std::runtime_error("bad numeric field '" + s + "' in " + where);
    }
}

void expect_header(const std::string& actual, const std::string& expected,
                   const std::string& path) {
    if (actual == expected) return;
    const auto want = split_csv(expected);
    const auto got = split_csv(actual);
    std::string missing;
    for (const auto& col : want)
        if (std::find(got.begin(), got.end(), col) == got.end())
            missing += missing.empty() ? col : ", " + col;
    if (!missing.empty())
        throw std::runtime_error(path + ": missing column(s): " + missing);
    throw std::runtime_error(path + ": unexpected column order, expected '" + expected + "'");
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_recording_csv(const std::string& path, const Recording& rec) {
    auto out = open_out(path);
    out << "time_s,value\n";
    char line[80];
    for (std::size_t i = 0; i < rec.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.6f,%.0f\n", rec.time_s[i], rec.value[i]);
        out << line;
    }
}

void write_recording_meta(const std::string& path, const RecordingMeta& meta) {
    ordered_json j;
    j["source_id"] = meta.source_id;
    j["sample_rate"] = meta.sample_rate;
    j["label"] = to_string(meta.label);
    j["duration_s"] = meta.duration_s;
    j["record_count"] = meta.record_count;
    j["malformed_count"] = meta.malformed_count;
    j["truncated"] = meta.truncated;
    open_out(path) << j.dump(2) << "\n";
}

Recording read_recording(const std::string& csv_path, const std::string& meta_path) {
    Recording rec;
    {
        auto in = open_in(meta_path);
        ordered_json j = ordered_json::parse(in);
        rec.source_id = j.value("source_id", std::string{});
        rec.sample_rate = j.value("sample_rate", 100.0);
        rec.label = label_from_string(j.value("label", std::string{"stationary"}));
    }
    auto in = open_in(csv_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(csv_path + ": empty file");
    expect_header(line, "time_s,value", csv_path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 2) throw std::runtime_error(csv_path + ": malformed row: " + line);
        rec.time_s.push_back(parse_double(fields[0], csv_path));
        rec.value.push_back(parse_double(fields[1], csv_path));
    }
    rec.validate();
    return rec;
}

void write_ground_truth(const std::string& path, const synth::GroundTruth& truth) {
    ordered_json j;
    j["class_label"] = to_string(truth.class_label);
    j["onset_times"] = truth.onset_times;
    j["systolic_times"] = truth.systolic_times;
    j["notch_times"] = truth.notch_times;
    j["diastolic_times"] = truth.diastolic_times;
    open_out(path) << j.dump(2) << "\n";
}

synth::GroundTruth read_ground_truth(const std::string& path) {
    auto in = open_in(path);
    ordered_json j = ordered_json::parse(in);
    synth::GroundTruth truth;
    truth.class_label = label_from_string(j.at("class_label").get<std::string>());
    truth.onset_times = j.at("onset_times").get<std::vector<double>>();
    truth.systolic_times = j.at("systolic_times").get<std::vector<double>>();
    truth.notch_times = j.at("notch_times").get<std::vector<double>>();
    truth.diastolic_times = j.at("diastolic_times").get<std::vector<double>>();
    return truth;
}

namespace {

constexpr const char* kPulseHeader =
    "recording,label,pulse_index,onset_t,end_t,sys_t,dic_t,dia_t,"
    "dia_found,dic_found,dia_fallback,"
    "fil_onset_m,fil_end_m,fil_sys_m,fil_dic_m,fil_dia_m,"
    "raw_onset_m,raw_end_m,raw_sys_m,raw_dic_m,raw_dia_m,"
    "det_onset_m,det_end_m,det_sys_m,det_dic_m,det_dia_m";

}  // namespace

void write_pulse_rows(const std::string& path, const std::vector<PulseRow>& rows) {
    auto out = open_out(path);
    out << kPulseHeader << "\n";
    for (const auto& r : rows) {
        out << r.recording << ',' << to_string(r.label) << ',' << r.pulse_index;
        for (double t : {r.onset_t, r.end_t, r.sys_t, r.dic_t, r.dia_t})
            out << ',' << format_double(t);
        out << ',' << (r.dia_found ? 1 : 0) << ',' << (r.dic_found ? 1 : 0) << ','
            << (r.dia_fallback ? 1 : 0);
        for (double m : {r.fil_onset_m, r.fil_end_m, r.fil_sys_m, r.fil_dic_m, r.fil_dia_m,
                         r.raw_onset_m, r.raw_end_m, r.raw_sys_m, r.raw_dic_m, r.raw_dia_m,
                         r.det_onset_m, r.det_end_m, r.det_sys_m, r.det_dic_m, r.det_dia_m})
            out << ',' << format_double(m);
        out << '\n';
    }
}

std::vector<PulseRow> read_pulse_rows(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    expect_header(line, kPulseHeader, path);
    std::vector<PulseRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 26) throw std::runtime_error(path + ": malformed row: " + line);
        PulseRow r;
        std::size_t i = 0;
        r.recording = f[i++];
        r.label = label_from_string(f[i++]);
        r.pulse_index = static_cast<std::size_t>(parse_double(f[i++], path));
        r.onset_t = parse_double(f[i++], path);
        r.end_t = parse_double(f[i++], path);
        r.sys_t = parse_double(f[i++], path);
        r.dic_t = parse_double(f[i++], path);
        r.dia_t = parse_double(f[i++], path);
        r.dia_found = f[i++] == "1";
        r.dic_found = f[i++] == "1";
        r.dia_fallback = f[i++] == "1";
        double* mags[] = {&r.fil_onset_m, &r.fil_end_m, &r.fil_sys_m, &r.fil_dic_m, &r.fil_dia_m,
                          &r.raw_onset_m, &r.raw_end_m, &r.raw_sys_m, &r.raw_dic_m, &r.raw_dia_m,
                          &r.det_onset_m, &r.det_end_m, &r.det_sys_m, &r.det_dic_m, &r.det_dia_m};
        for (double* m : mags) *m = parse_double(f[i++], path);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_feature_csv(const std::string& path, const std::vector<features::FeatureVector>& rows) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < features::kFeatureCount; ++i)
        out << features::kFeatureNames[i] << ',';
    out << "label,pulse_index,quality_flag\n";
    for (const auto& row : rows) {
        for (double v : row.values) out << format_double(v) << ',';
        out << to_string(row.label) << ',' << row.pulse_index << ','
            << (row.quality_flag ? 1 : 0) << '\n';
    }
}

std::vector<features::FeatureVector> read_feature_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    std::string expected;
    for (std::size_t i = 0; i < features::kFeatureCount; ++i)
        expected += std::string(features::kFeatureNames[i]) + ",";
    expected += "label,pulse_index,quality_flag";
    expect_header(line, expected, path);
    std::vector<features::FeatureVector> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != features::kFeatureCount + 3)
            throw std::runtime_error(path + ": malformed row: " + line);
        features::FeatureVector row;
        for (std::size_t i = 0; i < features::kFeatureCount; ++i)
            row.values[i] = parse_double(f[i], path);
        row.label = label_from_string(f[features::kFeatureCount]);
        row.pulse_index =
            static_cast<std::size_t>(parse_double(f[features::kFeatureCount + 1], path));
        row.quality_flag = f[features::kFeatureCount + 2] == "1";
        rows.push_back(row);
    }
    return rows;
}

void write_ranking_csv(const std::string& path, const std::vector<features::RankEntry>& ranking) {
    auto out = open_out(path);
    out << "feature,chi_squared\n";
    for (const auto& entry : ranking)
        out << entry.name << ',' << format_double(entry.score) << '\n';
}

std::vector<features::RankEntry> read_ranking_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    expect_header(line, "feature,chi_squared", path);
    std::vector<features::RankEntry> ranking;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 2) throw std::runtime_error(path + ": malformed row: " + line);
        ranking.push_back({f[0], parse_double(f[1], path)});
    }
    return ranking;
}

namespace {

constexpr const char* kReportHeader =
    "model,status,validation_accuracy,test_accuracy,"
    "precision_stationary,sensitivity_stationary,f1_stationary,"
    "precision_sit_to_stand,sensitivity_sit_to_stand,f1_sit_to_stand,"
    "precision_lie_to_stand,sensitivity_lie_to_stand,f1_lie_to_stand";

}  // namespace

void write_reports_csv(const std::string& path, const std::vector<ml::ModelReport>& reports) {
    auto out = open_out(path);
    out << kReportHeader << "\n";
    for (const auto& r : reports) {
        out << r.model << ',' << (r.ok ? "ok" : "failed") << ','
            << format_double(r.validation_accuracy) << ',' << format_double(r.test_accuracy);
        for (const auto& c : r.per_class)
            out << ',' << format_double(c.precision) << ',' << format_double(c.sensitivity) << ','
                << format_double(c.f1);
        out << '\n';
    }
}

std::vector<ml::ModelReport> read_reports_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    expect_header(line, kReportHeader, path);
    std::vector<ml::ModelReport> reports;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 13) throw std::runtime_error(path + ": malformed row: " + line);
        ml::ModelReport r;
        r.model = f[0];
        r.ok = f[1] == "ok";
        r.validation_accuracy = parse_double(f[2], path);
        r.test_accuracy = parse_double(f[3], path);
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            r.per_class[c].precision = parse_double(f[4 + c * 3], path);
            r.per_class[c].sensitivity = parse_double(f[5 + c * 3], path);
            r.per_class[c].f1 = parse_double(f[6 + c * 3], path);
        }
        reports.push_back(std::move(r));
    }
    return reports;
}

void write_onsets_csv(const std::string& path, const std::vector<std::size_t>& onsets,
                      const std::vector<double>& baseline, const std::vector<double>& filtered,
                      double sample_rate) {
    auto out = open_out(path);
    out << "onset_index,time_s,filtered,baseline\n";
    for (std::size_t idx : onsets) {
        out << idx << ',' << format_double(static_cast<double>(idx) / sample_rate) << ','
            << format_double(filtered[idx]) << ',' << format_double(baseline[idx]) << '\n';
    }
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (!key.empty()) entries.emplace_back(key, value);
    }
    return entries;
}

}  // namespace ppg::io
