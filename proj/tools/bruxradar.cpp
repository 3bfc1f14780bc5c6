// bruxradar: command-line front end for the bruxism-recognition pipeline.
//
// Subcommands cover the full workflow on synthetic radar data:
//   simulate   write a labeled dataset of raw .iq captures plus a manifest
//   featurize  turn a manifest into a feature CSV (all-or-nothing)
//   train      fit a random forest on a feature CSV and serialize it
//   predict    classify a feature CSV with a saved model
//   evaluate   k-fold cross-validation, structured report, pooled accuracy
//
// Every command is deterministic given its configuration and seed; rerunning
// one produces byte-identical output files. Environment variables carry no
// semantics.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error.

#include <algorithm>
#include <array>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "brux/config.hpp"
#include "brux/errors.hpp"
#include "brux/eval.hpp"
#include "brux/features.hpp"
#include "brux/forest.hpp"
#include "brux/iq.hpp"
#include "brux/manifest.hpp"
#include "brux/pipeline.hpp"
#include "brux/sim.hpp"
#include "brux/types.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitSuccess = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Raised for problems with the invocation itself — bad flag values or an
// unusable configuration file — as opposed to problems with the data files a
// command processes.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code_for(brux::Errc code) {
    switch (code) {
        case brux::Errc::InvalidArgument:
        case brux::Errc::BadConfig:
            return kExitUsage;
        default:
            return kExitData;
    }
}

// Error::what() prefixes the code name; strip it where surrounding text
// supplies its own context.
std::string bare_message(const brux::Error& error) {
    const std::string text = error.what();
    const std::string prefix = std::string(brux::errc_name(error.code())) + ": ";
    return text.rfind(prefix, 0) == 0 ? text.substr(prefix.size()) : text;
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        brux::raise(brux::Errc::IoError, "cannot open '" + path + "' for reading");
    }
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>()};
    if (in.bad()) {
        brux::raise(brux::Errc::IoError, "read failure on '" + path + "'");
    }
    return bytes;
}

void write_binary_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        brux::raise(brux::Errc::IoError, "cannot open '" + path + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        brux::raise(brux::Errc::IoError, "write failure on '" + path + "'");
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        brux::raise(brux::Errc::IoError, "cannot open '" + path + "' for writing");
    }
    out << text;
    if (!out) {
        brux::raise(brux::Errc::IoError, "write failure on '" + path + "'");
    }
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) {
        brux::raise(brux::Errc::IoError,
                    "cannot create directory '" + path + "': " + ec.message());
    }
}

// --config / --seed handling shared by the subcommands that take a RunConfig.
struct ConfigCli {
    std::string path;
    std::uint64_t seed = 0;
    CLI::Option* seed_option = nullptr;
};

void add_config_options(CLI::App& cmd, ConfigCli& cli) {
    cmd.add_option("--config", cli.path,
                   "run configuration file (built-in defaults when omitted)");
    cli.seed_option = cmd.add_option("--seed", cli.seed, "override the configured master seed");
}

brux::RunConfig resolve_config(const ConfigCli& cli) {
    brux::RunConfig config;
    if (!cli.path.empty()) {
        try {
            config = brux::load_run_config(cli.path);
        } catch (const brux::Error& error) {
            // An unreadable or unparseable configuration is the caller's
            // problem, whatever the underlying error code.
            throw UsageError(error.what());
        }
    }
    if (cli.seed_option != nullptr && cli.seed_option->count() > 0) {
        config.seed = cli.seed;
    }
    return config;
}

std::vector<std::string> canonical_feature_names() {
    const auto& names = brux::feature_names();
    return {names.begin(), names.end()};
}

std::vector<int> class_indices(const std::vector<brux::Label>& labels) {
    std::vector<int> y(labels.size());
    std::transform(labels.begin(), labels.end(), y.begin(),
                   [](brux::Label label) { return static_cast<int>(label); });
    return y;
}

int run_simulate(const brux::RunConfig& config, const std::string& out_dir, int n_per_class) {
    if (n_per_class < 1) {
        throw UsageError("--per-class must be at least 1 (got " + std::to_string(n_per_class) +
                         ")");
    }
    config.radar.validate();
    ensure_directory(out_dir);

    brux::DatasetManifest manifest;
    manifest.radar = config.radar;
    const int total = 2 * n_per_class;
    manifest.entries.reserve(static_cast<std::size_t>(total));
    // One recording at a time: a full dataset of frames would not fit a small
    // machine, a single frame always does.
    for (int index = 0; index < total; ++index) {
        const brux::LabeledRecording recording =
            brux::make_dataset_sample(index, config.radar, config.scenario, config.seed);
        const std::string file = recording.id + ".iq";
        write_binary_file((fs::path(out_dir) / file).string(), brux::write_raw(recording.frame));
        manifest.entries.push_back({recording.id, file, recording.scenario.label,
                                    recording.frame.layout, recording.frame.slow_time_rate_hz});
    }
    const std::string manifest_path = (fs::path(out_dir) / "manifest.json").string();
    brux::save_manifest(manifest_path, manifest);

    std::cout << "wrote " << total << " recordings (" << n_per_class << " per class) to "
              << out_dir << '\n'
              << "manifest: " << manifest_path << '\n';
    return kExitSuccess;
}

int run_featurize(const brux::RunConfig& config, const std::string& manifest_path,
                  const std::string& out_csv, const std::string& trace_dir) {
    const brux::DatasetManifest manifest = brux::load_manifest(manifest_path);

    brux::FeatureTable table;
    const int n = static_cast<int>(manifest.entries.size());
    table.ids.reserve(manifest.entries.size());
    table.labels.reserve(manifest.entries.size());
    table.x = brux::Matrix::zeros(n, brux::kNumFeatures);
    std::vector<brux::PipelineTrace> traces;

    for (int row = 0; row < n; ++row) {
        const brux::ManifestEntry& entry = manifest.entries[static_cast<std::size_t>(row)];
        try {
            const std::vector<std::uint8_t> bytes =
                read_binary_file(brux::resolve_manifest_file(manifest_path, entry));
            const brux::IqFrame frame =
                brux::parse_raw(bytes, entry.layout, entry.slow_time_rate_hz);
            brux::PipelineTrace trace;
            // Captures are interpreted with the radar settings they were
            // recorded with (from the manifest); the --config radar section
            // plays no role here.
            const brux::PhaseDiffSeries diff =
                brux::process_recording(frame, manifest.radar.bandwidth_hz, config.pipeline,
                                        trace_dir.empty() ? nullptr : &trace);
            const brux::FeatureVector features = brux::extract_features(diff, config.features);
            const std::array<double, brux::kNumFeatures> values = features.to_array();
            for (int c = 0; c < brux::kNumFeatures; ++c) {
                table.x.at(row, c) = values[static_cast<std::size_t>(c)];
            }
            if (!trace_dir.empty()) {
                traces.push_back(std::move(trace));
            }
        } catch (const brux::Error& error) {
            brux::raise(error.code(), "recording '" + entry.id + "': " + bare_message(error));
        }
        table.ids.push_back(entry.id);
        table.labels.push_back(entry.label);
    }

    // Nothing is written until every recording went through, so a failure
    // can never leave a truncated dataset behind.
    if (!trace_dir.empty()) {
        ensure_directory(trace_dir);
        for (int row = 0; row < n; ++row) {
            brux::write_trace(traces[static_cast<std::size_t>(row)], trace_dir,
                              manifest.entries[static_cast<std::size_t>(row)].id);
        }
    }
    brux::write_feature_csv(out_csv, table);

    std::cout << "featurized " << n << " recordings -> " << out_csv << '\n';
    if (!trace_dir.empty()) {
        std::cout << "traces: " << trace_dir << '\n';
    }
    return kExitSuccess;
}

int run_train(const brux::RunConfig& config, const std::string& features_csv,
              const std::string& model_out) {
    const brux::FeatureTable table = brux::read_feature_csv(features_csv);
    const std::vector<int> y = class_indices(table.labels);

    brux::ForestParams params = config.forest;
    params.seed = config.seed;
    const brux::ForestModel model = brux::fit(table.x, y, params, canonical_feature_names());
    brux::save_model(model_out, model);

    const std::vector<int> predicted = brux::predict(model, table.x);
    int correct = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (predicted[i] == y[static_cast<std::size_t>(i)]) {
            ++correct;
        }
    }
    const double accuracy = static_cast<double>(correct) / static_cast<double>(y.size());

    std::cout << "trained " << params.n_estimators << "-tree forest on " << y.size()
              << " recordings\n"
              << "training accuracy " << brux::format_double(accuracy) << '\n'
              << "model: " << model_out << '\n';
    return kExitSuccess;
}

int run_predict(const std::string& model_path, const std::string& features_csv,
                const std::string& out_csv) {
    const brux::ForestModel model = brux::load_model(model_path);
    const brux::FeatureTable table = brux::read_feature_csv(features_csv);
    const std::vector<int> predicted = brux::predict(model, table.x);

    std::ostringstream out;
    out << "id,label,predicted\n";
    std::size_t correct = 0;
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
        const brux::Label guess = static_cast<brux::Label>(predicted[i]);
        if (guess == table.labels[i]) {
            ++correct;
        }
        out << table.ids[i] << ',' << brux::to_string(table.labels[i]) << ','
            << brux::to_string(guess) << '\n';
    }
    write_text_file(out_csv, out.str());

    const std::size_t n = table.ids.size();
    std::cout << "predicted " << n << " recordings -> " << out_csv << '\n';
    if (n > 0) {
        const double accuracy = static_cast<double>(correct) / static_cast<double>(n);
        std::cout << "accuracy " << brux::format_double(accuracy) << " (" << correct << "/" << n
                  << " match the CSV labels)\n";
    }
    return kExitSuccess;
}

int run_evaluate(const brux::RunConfig& config, const std::string& features_csv,
                 const std::string& report_out, const std::string& importance_out) {
    const brux::FeatureTable table = brux::read_feature_csv(features_csv);
    const std::vector<int> y = class_indices(table.labels);

    brux::ForestParams params = config.forest;
    params.seed = config.seed;
    const brux::MetricsReport report = brux::cross_validate(
        table.x, y, params, config.eval_folds, config.seed, canonical_feature_names());
    brux::write_report_file(report_out, report, brux::run_config_text(config));

    std::cout << "evaluated " << report.n_samples << " recordings in " << report.folds
              << " folds\n"
              << "pooled accuracy " << brux::format_double(report.pooled_accuracy) << '\n'
              << "grinding precision " << brux::format_double(report.grinding.precision)
              << ", recall " << brux::format_double(report.grinding.recall) << ", f1 "
              << brux::format_double(report.grinding.f1) << '\n'
              << "no_grinding precision " << brux::format_double(report.no_grinding.precision)
              << ", recall " << brux::format_double(report.no_grinding.recall) << ", f1 "
              << brux::format_double(report.no_grinding.f1) << '\n'
              << "report: " << report_out << '\n';

    if (!importance_out.empty()) {
        std::vector<std::size_t> order(report.feature_names.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return report.mean_importances[a] > report.mean_importances[b];
        });
        std::ostringstream out;
        for (const std::size_t i : order) {
            out << report.feature_names[i] << ' '
                << brux::format_double(report.mean_importances[i]) << '\n';
        }
        write_text_file(importance_out, out.str());
        std::cout << "importances: " << importance_out << '\n';
    }
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contactless bruxism recognition on synthetic radar captures"};
    app.set_version_flag("--version", "bruxradar 1.0.0");
    app.require_subcommand(1);

    std::function<int()> action;

    CLI::App* simulate =
        app.add_subcommand("simulate", "generate a labeled synthetic dataset (.iq + manifest)");
    ConfigCli simulate_config;
    add_config_options(*simulate, simulate_config);
    std::string simulate_out;
    int n_per_class = 90;
    simulate->add_option("--out", simulate_out, "output directory for captures and manifest.json")
        ->required();
    simulate->add_option("-n,--per-class", n_per_class, "recordings per class")
        ->capture_default_str();
    simulate->callback([&] {
        action = [&] {
            return run_simulate(resolve_config(simulate_config), simulate_out, n_per_class);
        };
    });

    CLI::App* featurize =
        app.add_subcommand("featurize", "compute the feature CSV for a whole manifest");
    ConfigCli featurize_config;
    add_config_options(*featurize, featurize_config);
    std::string featurize_manifest;
    std::string featurize_out;
    std::string featurize_trace_dir;
    featurize->add_option("--manifest", featurize_manifest, "dataset manifest (manifest.json)")
        ->required();
    featurize->add_option("--out", featurize_out, "output feature CSV")->required();
    featurize->add_option("--trace-dir", featurize_trace_dir,
                          "also dump per-recording pipeline traces into this directory");
    featurize->callback([&] {
        action = [&] {
            return run_featurize(resolve_config(featurize_config), featurize_manifest,
                                 featurize_out, featurize_trace_dir);
        };
    });

    CLI::App* train =
        app.add_subcommand("train", "fit a random forest on a feature CSV and save it");
    ConfigCli train_config;
    add_config_options(*train, train_config);
    std::string train_features;
    std::string train_out;
    train->add_option("--features", train_features, "input feature CSV")->required();
    train->add_option("--out", train_out, "output model file")->required();
    train->callback([&] {
        action = [&] {
            return run_train(resolve_config(train_config), train_features, train_out);
        };
    });

    CLI::App* predict =
        app.add_subcommand("predict", "classify a feature CSV with a saved model");
    std::string predict_model;
    std::string predict_features;
    std::string predict_out;
    predict->add_option("--model", predict_model, "serialized model file")->required();
    predict->add_option("--features", predict_features, "input feature CSV")->required();
    predict->add_option("--out", predict_out, "output prediction CSV")->required();
    predict->callback([&] {
        action = [&] { return run_predict(predict_model, predict_features, predict_out); };
    });

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "k-fold cross-validation of the forest on a feature CSV");
    ConfigCli evaluate_config;
    add_config_options(*evaluate, evaluate_config);
    std::string evaluate_features;
    std::string evaluate_out;
    std::string evaluate_importance;
    evaluate->add_option("--features", evaluate_features, "input feature CSV")->required();
    evaluate->add_option("--out", evaluate_out, "output report file")->required();
    evaluate->add_option("--importance", evaluate_importance,
                         "also write mean feature importances (descending) to this file");
    evaluate->callback([&] {
        action = [&] {
            return run_evaluate(resolve_config(evaluate_config), evaluate_features, evaluate_out,
                                evaluate_importance);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    try {
        return action();
    } catch (const UsageError& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitUsage;
    } catch (const brux::Error& error) {
        std::cerr << "error: " << error.what() << '\n';
        return exit_code_for(error.code());
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitData;
    }
}
