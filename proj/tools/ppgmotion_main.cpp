// Command-line front end: simulate / device / receive / process / features /
// rank / train / report. Stages hand off through CSV files so every
// intermediate is inspectable.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppgmotion/io.hpp"
#include "ppgmotion/pipeline.hpp"
#include "ppgmotion/synth.hpp"
#include "ppgmotion/wire.hpp"

namespace fs = std::filesystem;
using namespace ppg;

namespace {

struct SimulateArgs {
    std::string klass = "stationary";
    std::string out_dir = ".";
    double duration = 60.0;
    double noise_sigma = 80.0;
    double sample_rate = 100.0;
    int batch_stationary = 0;
    int batch_sit = 24;
    int batch_lie = 14;
    bool batch = false;
};

std::string meta_path_for(const std::string& csv) {
    return fs::path(csv).replace_extension(".meta.json").string();
}
std::string truth_path_for(const std::string& csv) {
    return fs::path(csv).replace_extension(".truth.json").string();
}

void write_one_recording(const synth::ScenarioSpec& spec, const std::string& csv_path) {
    const auto [rec, truth] = synth::generate_recording(spec);
    io::write_recording_csv(csv_path, rec);
    io::RecordingMeta meta;
    meta.source_id = rec.source_id;
    meta.sample_rate = rec.sample_rate;
    meta.label = rec.label;
    meta.duration_s = rec.time_s.empty() ? 0.0 : rec.time_s.back();
    meta.record_count = rec.size();
    io::write_recording_meta(meta_path_for(csv_path), meta);
    io::write_ground_truth(truth_path_for(csv_path), truth);
}

int cmd_simulate(const SimulateArgs& args, std::uint64_t seed) {
    fs::create_directories(args.out_dir);
    auto spec_for = [&](Label label, std::uint64_t s) {
        auto spec = synth::ScenarioSpec::for_class(label, s);
        spec.duration = args.duration;
        spec.noise_sigma = args.noise_sigma;
        spec.sample_rate = args.sample_rate;
        return spec;
    };
    if (!args.batch) {
        const Label label = label_from_string(args.klass);
        const auto path = (fs::path(args.out_dir) /
                           ("rec_" + to_string(label) + "_seed" + std::to_string(seed) + ".csv"))
                              .string();
        write_one_recording(spec_for(label, seed), path);
        std::cout << path << "\n";
        return 0;
    }
    int counter = 0;
    auto emit_class = [&](Label label, int count) {
        for (int i = 0; i < count; ++i) {
            char name[64];
            std::snprintf(name, sizeof(name), "rec_%03d_%s.csv", counter,
                          to_string(label).c_str());
            const auto path = (fs::path(args.out_dir) / name).string();
            write_one_recording(spec_for(label, seed + static_cast<std::uint64_t>(counter)), path);
            std::cout << path << "\n";
            ++counter;
        }
    };
    emit_class(Label::Stationary, args.batch_stationary);
    emit_class(Label::SitToStand, args.batch_sit);
    emit_class(Label::LieToStand, args.batch_lie);
    return 0;
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
    const auto colon = endpoint.rfind(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("endpoint must be host:port, got " + endpoint);
    return {endpoint.substr(0, colon),
            static_cast<std::uint16_t>(std::stoi(endpoint.substr(colon + 1)))};
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> items;
    std::string item;
    std::stringstream ss(csv);
    while (std::getline(ss, item, ','))
        if (!item.empty()) items.push_back(item);
    return items;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PPG postural-movement recognition pipeline"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    std::string config_path;
    app.add_option("--seed", seed, "global random seed");
    app.add_option("--config", config_path, "key=value model configuration file");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "generate synthetic recordings");
    simulate->add_option("--class", sim.klass, "stationary | sit-to-stand | lie-to-stand");
    simulate->add_option("--duration", sim.duration, "recording length in seconds");
    simulate->add_option("--noise-sigma", sim.noise_sigma, "white noise std (a.u.)");
    simulate->add_option("--rate", sim.sample_rate, "sample rate in Hz");
    simulate->add_option("--out-dir", sim.out_dir, "output directory");
    simulate->add_flag("--batch", sim.batch, "write a labelled corpus instead of one recording");
    simulate->add_option("--batch-stationary", sim.batch_stationary,
                         "stationary recordings in the batch");
    simulate->add_option("--batch-sit", sim.batch_sit, "sit-to-stand recordings in the batch");
    simulate->add_option("--batch-lie", sim.batch_lie, "lie-to-stand recordings in the batch");

    std::string dev_listen = "127.0.0.1:7001";
    std::string dev_scenario = "stationary";
    std::string dev_replay;
    double dev_rate = 100.0, dev_limit = 60.0;
    int dev_sessions = 1;
    bool dev_pace = false;
    auto* device = app.add_subcommand("device", "serve the sensor stream over TCP");
    device->add_option("--listen", dev_listen, "host:port to listen on");
    device->add_option("--scenario", dev_scenario, "synthetic scenario class");
    device->add_option("--replay", dev_replay, "recording CSV to replay instead of a scenario");
    device->add_option("--rate", dev_rate, "sample rate in Hz");
    device->add_option("--limit-seconds", dev_limit, "session limit in recorded seconds");
    device->add_option("--sessions", dev_sessions, "sessions to serve before exiting");
    device->add_flag("--pace", dev_pace, "pace the stream against the wall clock");

    std::string rx_connect = "127.0.0.1:7001";
    std::string rx_out = "recording.csv";
    std::string rx_label = "stationary";
    double rx_rate = 100.0, rx_expected = 60.0;
    auto* receive = app.add_subcommand("receive", "receive a session and store the recording");
    receive->add_option("--connect", rx_connect, "device host:port");
    receive->add_option("--out", rx_out, "output recording CSV path");
    receive->add_option("--rate", rx_rate, "nominal sample rate in Hz");
    receive->add_option("--limit-seconds", rx_expected, "expected session length");
    receive->add_option("--label", rx_label, "class label stored in the metadata");

    std::vector<std::string> proc_inputs;
    std::string proc_out = "pulses.csv";
    std::string proc_onsets_dir;
    pipeline::ProcessOptions proc_opts;
    auto* process = app.add_subcommand("process", "segment recordings and locate POI");
    process->add_option("inputs", proc_inputs, "recording CSV files")->required();
    process->add_option("--out", proc_out, "output pulses CSV");
    process->add_option("--f-lo", proc_opts.f_lo, "band-pass low edge (cycles/sample)");
    process->add_option("--f-hi", proc_opts.f_hi, "band-pass high edge (cycles/sample)");
    process->add_option("--outlier-lo", proc_opts.outlier_lo, "minimum plausible sample value");
    process->add_option("--outlier-hi", proc_opts.outlier_hi, "maximum plausible sample value");
    process->add_option("--onsets-dir", proc_onsets_dir,
                        "directory for onset/baseline CSV exports");

    std::string feat_pulses = "pulses.csv";
    std::string feat_out = "features.csv";
    pipeline::FeatureOptions feat_opts;
    auto* featcmd = app.add_subcommand("features", "extract the per-pulse feature matrix");
    featcmd->add_option("--pulses", feat_pulses, "pulses CSV from the process stage");
    featcmd->add_option("--out", feat_out, "output features CSV");
    featcmd->add_option("--stationary-window", feat_opts.stationary_window,
                        "seconds of stationary baseline");
    featcmd->add_option("--movement-onset", feat_opts.movement_onset, "protocol movement time");
    featcmd->add_option("--label-window", feat_opts.label_window,
                        "seconds after movement labelled as the movement class");

    std::string rank_features = "features.csv";
    std::string rank_out = "ranking.csv";
    auto* rank = app.add_subcommand("rank", "chi-squared feature ranking");
    rank->add_option("--features", rank_features, "features CSV");
    rank->add_option("--out", rank_out, "output ranking CSV");

    std::string train_features = "features.csv";
    std::string train_out = "reports.csv";
    std::string train_models;
    std::string train_drop = "dicrotic_magnitude";
    auto* train = app.add_subcommand("train", "train and evaluate the classifier grid");
    train->add_option("--features", train_features, "features CSV");
    train->add_option("--out", train_out, "output reports CSV");
    train->add_option("--models", train_models, "comma-separated preset names (default: all)");
    train->add_option("--drop", train_drop, "comma-separated features to drop");

    std::string rep_reports = "reports.csv";
    std::string rep_out_dir = ".";
    auto* report = app.add_subcommand("report", "summaries and plot-ready F1 bars");
    report->add_option("--reports", rep_reports, "reports CSV from the train stage");
    report->add_option("--out-dir", rep_out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(sim, seed);

        if (device->parsed()) {
            const auto [host, port] = parse_endpoint(dev_listen);
            std::vector<double> samples;
            if (!dev_replay.empty()) {
                samples = io::read_recording(dev_replay, meta_path_for(dev_replay)).value;
            } else {
                auto spec = synth::ScenarioSpec::for_class(label_from_string(dev_scenario), seed);
                spec.sample_rate = dev_rate;
                spec.duration = std::max(dev_limit, spec.duration);
                samples = synth::generate_recording(spec).first.value;
            }
            wire::SessionConfig config;
            config.listen_host = host;
            config.port = port;
            config.sample_rate = dev_rate;
            config.session_limit_s = dev_limit;
            config.pace = dev_pace;
            wire::TcpListener listener(host, port);
            std::cerr << "device: listening on " << host << ":" << listener.port() << "\n";
            for (int s = 0; s < dev_sessions; ++s) {
                auto client = listener.accept_one();
                const auto stats = wire::serve_session(std::move(client), config, samples);
                std::cerr << "device: session " << s << " sent " << stats.sensor_records
                          << " sensor records"
                          << (stats.client_disconnected ? " (client disconnected)" : "") << "\n";
            }
            return 0;
        }

        if (receive->parsed()) {
            const auto [host, port] = parse_endpoint(rx_connect);
            auto result = wire::run_receiver(host, port, rx_rate, rx_expected);
            if (result.recording.size() == 0) {
                std::cerr << "receive: no records received, nothing stored\n";
                return 2;
            }
            result.recording.label = label_from_string(rx_label);
            io::write_recording_csv(rx_out, result.recording);
            io::RecordingMeta meta;
            meta.source_id = result.recording.source_id;
            meta.sample_rate = rx_rate;
            meta.label = result.recording.label;
            meta.duration_s = result.session_duration_s;
            meta.record_count = result.record_count;
            meta.malformed_count = result.malformed;
            meta.truncated = result.truncated;
            io::write_recording_meta(meta_path_for(rx_out), meta);
            std::cout << rx_out << "\n";
            return 0;
        }

        if (process->parsed()) {
            std::vector<io::PulseRow> rows;
            std::size_t skipped = 0;
            for (const auto& input : proc_inputs) {
                const auto name = fs::path(input).stem().string();
                try {
                    const auto rec = io::read_recording(input, meta_path_for(input));
                    auto opts = proc_opts;
                    if (!proc_onsets_dir.empty()) {
                        fs::create_directories(proc_onsets_dir);
                        opts.onsets_out =
                            (fs::path(proc_onsets_dir) / (name + "_onsets.csv")).string();
                    }
                    const auto processed = pipeline::process_recording(rec, opts, name);
                    auto new_rows = pipeline::to_pulse_rows(processed);
                    rows.insert(rows.end(), new_rows.begin(), new_rows.end());
                } catch (const std::exception& e) {
                    ++skipped;
                    std::cerr << "process: skipped " << input << ": " << e.what() << "\n";
                }
            }
            if (rows.empty()) {
                std::cerr << "process: no usable recordings\n";
                return 2;
            }
            io::write_pulse_rows(proc_out, rows);
            std::cerr << "process: " << rows.size() << " pulses from "
                      << (proc_inputs.size() - skipped) << " recordings (" << skipped
                      << " skipped)\n";
            return 0;
        }

        if (featcmd->parsed()) {
            const auto rows = io::read_pulse_rows(feat_pulses);
            std::vector<std::string> skipped;
            const auto fv = pipeline::features_from_rows(rows, feat_opts, &skipped);
            for (const auto& s : skipped) std::cerr << "features: skipped " << s << "\n";
            if (fv.empty()) {
                std::cerr << "features: no usable recordings\n";
                return 2;
            }
            io::write_feature_csv(feat_out, fv);
            return 0;
        }

        if (rank->parsed()) {
            const auto fv = io::read_feature_csv(rank_features);
            io::write_ranking_csv(rank_out, features::chi_squared_scores(fv));
            return 0;
        }

        if (train->parsed()) {
            const auto fv = io::read_feature_csv(train_features);
            pipeline::TrainOptions opts;
            opts.models = split_list(train_models);
            opts.drop = split_list(train_drop);
            opts.seed = seed;
            if (!config_path.empty()) opts.config = io::read_config(config_path);
            const auto reports = pipeline::train_stage(fv, opts);
            io::write_reports_csv(train_out, reports);
            for (const auto& r : reports)
                if (!r.ok) std::cerr << "train: " << r.model << " failed: " << r.error << "\n";
            return 0;
        }

        if (report->parsed()) {
            fs::create_directories(rep_out_dir);
            auto reports = io::read_reports_csv(rep_reports);
            auto mean_f1 = [](const ml::ModelReport& r) {
                double s = 0.0;
                for (const auto& c : r.per_class) s += c.f1;
                return s / static_cast<double>(kNumClasses);
            };
            std::stable_sort(reports.begin(), reports.end(),
                             [&](const ml::ModelReport& a, const ml::ModelReport& b) {
                                 return mean_f1(a) > mean_f1(b);
                             });
            io::write_reports_csv((fs::path(rep_out_dir) / "report_summary.csv").string(),
                                  reports);
            std::ofstream bars((fs::path(rep_out_dir) / "f1_bars.csv").string());
            bars << "model,class,f1_percent\n";
            for (const auto& r : reports)
                for (std::size_t c = 0; c < kNumClasses; ++c)
                    bars << r.model << ',' << to_string(static_cast<Label>(c)) << ','
                         << io::format_double(r.per_class[c].f1) << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
