// Black-box integration tests for the bruxradar command-line tool. Every
// test runs the real binary in a subprocess and asserts on exit codes,
// printed output, and the files left behind. The exit-code convention under
// test: 0 success, 1 usage/configuration error, 2 data error.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "support/test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args) {
    const std::string command = std::string(BRUXRADAR_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buffer[512];
    while (std::fgets(buffer, sizeof(buffer), pipe) != nullptr) {
        result.output += buffer;
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

// Small but complete run configuration: 1 s recordings keep the fixture
// cheap, 12 trees and 3 folds still exercise the full forest machinery.
constexpr const char* kSmallConfig =
    "[run]\n"
    "seed = 11\n"
    "\n[radar]\n"
    "duration_s = 1.0\n"
    "\n[forest]\n"
    "n_estimators = 12\n"
    "\n[eval]\n"
    "folds = 3\n";

int count_lines(const std::string& text) {
    int lines = 0;
    for (const char c : text) {
        if (c == '\n') ++lines;
    }
    return lines;
}

// One dataset shared by the whole binary: simulated and featurized once,
// tests that need to corrupt something copy what they need first.
struct SharedDataset {
    testutil::TempDir dir{"bruxradar_cli"};
    std::string config = dir.file("small.cfg");
    std::string data_dir = dir.file("data");
    std::string manifest = dir.file("data/manifest.json");
    std::string features = dir.file("features.csv");

    SharedDataset() {
        testutil::write_text_file(config, kSmallConfig);
        const CliResult sim =
            run_cli("simulate --config " + config + " --out " + data_dir + " --per-class 6");
        REQUIRE(sim.exit_code == 0);
        const CliResult feat = run_cli("featurize --config " + config + " --manifest " +
                                       manifest + " --out " + features);
        REQUIRE(feat.exit_code == 0);
    }
};

SharedDataset& shared() {
    static SharedDataset dataset;
    return dataset;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes the captures, the manifest, and a summary") {
    const SharedDataset& ws = shared();
    CHECK(fs::exists(ws.manifest));
    for (int i = 0; i < 12; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "rec_%04d.iq", i);
        CHECK(fs::exists(fs::path(ws.data_dir) / name));
    }
    CHECK_FALSE(fs::exists(fs::path(ws.data_dir) / "rec_0012.iq"));

    const CliResult again = run_cli("simulate --config " + ws.config + " --out " +
                                    shared().dir.file("data_again") + " --per-class 6");
    CHECK(again.exit_code == 0);
    CHECK(again.output.find("12 recordings") != std::string::npos);
}

TEST_CASE("simulate rejects a non-positive per-class count with a usage error") {
    const CliResult result =
        run_cli("simulate --out " + shared().dir.file("unused") + " --per-class 0");
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("per-class") != std::string::npos);
}

TEST_CASE("rerunning simulate reproduces every output byte for byte") {
    const SharedDataset& ws = shared();
    const std::string rerun_dir = ws.dir.file("data_rerun");
    const CliResult rerun =
        run_cli("simulate --config " + ws.config + " --out " + rerun_dir + " --per-class 6");
    REQUIRE(rerun.exit_code == 0);

    CHECK(testutil::read_text_file(ws.manifest) ==
          testutil::read_text_file(rerun_dir + "/manifest.json"));
    for (int i = 0; i < 12; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "rec_%04d.iq", i);
        CHECK(testutil::read_text_file((fs::path(ws.data_dir) / name).string()) ==
              testutil::read_text_file((fs::path(rerun_dir) / name).string()));
    }
}

TEST_CASE("bad invocations are usage errors, help is not") {
    CHECK(run_cli("simulate").exit_code == 1);             // missing required --out
    CHECK(run_cli("frobnicate").exit_code == 1);           // unknown subcommand
    CHECK(run_cli("").exit_code == 1);                     // missing subcommand
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("simulate --help").exit_code == 0);
}

TEST_CASE("configuration problems are usage errors") {
    const std::string missing = shared().dir.file("no_such.cfg");
    const CliResult absent =
        run_cli("simulate --config " + missing + " --out " + shared().dir.file("unused2"));
    CHECK(absent.exit_code == 1);

    const std::string bad = shared().dir.file("bad.cfg");
    testutil::write_text_file(bad, "[radar]\nwarp_speed = 9\n");
    const CliResult unknown_key =
        run_cli("simulate --config " + bad + " --out " + shared().dir.file("unused3"));
    CHECK(unknown_key.exit_code == 1);
    CHECK(unknown_key.output.find("warp_speed") != std::string::npos);
}

TEST_CASE("featurize writes one row per recording under the canonical header") {
    const SharedDataset& ws = shared();
    const std::string csv = testutil::read_text_file(ws.features);
    CHECK(count_lines(csv) == 13);  // header + 12 rows
    CHECK(csv.rfind("id,label,kurtosis,abs_mean,variance,entropy,spectral_entropy,"
                    "spectral_variance,band_energy_5_10,n_maxima,n_minima,n_above_thresh,"
                    "n_below_thresh\n",
                    0) == 0);
    CHECK(csv.find("rec_0000,grinding,") != std::string::npos);
    CHECK(csv.find("rec_0001,no_grinding,") != std::string::npos);
}

TEST_CASE("rerunning featurize reproduces the CSV byte for byte") {
    const SharedDataset& ws = shared();
    const std::string rerun_csv = ws.dir.file("features_rerun.csv");
    const CliResult rerun = run_cli("featurize --config " + ws.config + " --manifest " +
                                    ws.manifest + " --out " + rerun_csv);
    REQUIRE(rerun.exit_code == 0);
    CHECK(testutil::read_text_file(ws.features) == testutil::read_text_file(rerun_csv));
}

TEST_CASE("featurize on a missing manifest is a data error") {
    const CliResult result = run_cli("featurize --manifest " + shared().dir.file("nope.json") +
                                     " --out " + shared().dir.file("unused.csv"));
    CHECK(result.exit_code == 2);
}

TEST_CASE("a missing capture fails featurization naming the recording") {
    const SharedDataset& ws = shared();
    const std::string broken_dir = ws.dir.file("broken");
    fs::copy(ws.data_dir, broken_dir);
    fs::remove(fs::path(broken_dir) / "rec_0003.iq");

    const std::string out_csv = ws.dir.file("broken.csv");
    const CliResult result =
        run_cli("featurize --manifest " + broken_dir + "/manifest.json --out " + out_csv);
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("rec_0003") != std::string::npos);
    CHECK_FALSE(fs::exists(out_csv));  // all-or-nothing: no partial CSV
}

TEST_CASE("featurize can dump pipeline traces next to the CSV") {
    const SharedDataset& ws = shared();
    const std::string trace_dir = ws.dir.file("traces");
    const CliResult result =
        run_cli("featurize --config " + ws.config + " --manifest " + ws.manifest + " --out " +
                ws.dir.file("traced.csv") + " --trace-dir " + trace_dir);
    REQUIRE(result.exit_code == 0);
    CHECK(fs::exists(fs::path(trace_dir) / "rec_0000_power.txt"));
    CHECK(fs::exists(fs::path(trace_dir) / "rec_0011_diff.txt"));
}

TEST_CASE("train writes a versioned model and reports training accuracy") {
    const SharedDataset& ws = shared();
    const std::string model = ws.dir.file("model.txt");
    const CliResult result =
        run_cli("train --config " + ws.config + " --features " + ws.features + " --out " + model);
    REQUIRE(result.exit_code == 0);
    CHECK(result.output.find("training accuracy") != std::string::npos);
    CHECK(testutil::read_text_file(model).rfind("bruxforest 1\n", 0) == 0);
}

TEST_CASE("training on a single-class table is a data error") {
    const SharedDataset& ws = shared();
    // Keep the header and only the grinding rows.
    const std::string csv = testutil::read_text_file(ws.features);
    std::string one_class;
    std::size_t start = 0;
    bool header = true;
    while (start < csv.size()) {
        const std::size_t end = csv.find('\n', start);
        const std::string line = csv.substr(start, end - start);
        if (header || line.find(",no_grinding,") == std::string::npos) {
            one_class += line + "\n";
        }
        header = false;
        start = end + 1;
    }
    const std::string path = ws.dir.file("one_class.csv");
    testutil::write_text_file(path, one_class);

    const CliResult result = run_cli("train --config " + ws.config + " --features " + path +
                                     " --out " + ws.dir.file("unused_model.txt"));
    CHECK(result.exit_code == 2);
}

TEST_CASE("predict on the training table is near-perfect and reproducible") {
    const SharedDataset& ws = shared();
    const std::string model = ws.dir.file("predict_model.txt");
    REQUIRE(run_cli("train --config " + ws.config + " --features " + ws.features + " --out " +
                    model)
                .exit_code == 0);

    const std::string out1 = ws.dir.file("pred1.csv");
    const std::string out2 = ws.dir.file("pred2.csv");
    const CliResult first =
        run_cli("predict --model " + model + " --features " + ws.features + " --out " + out1);
    REQUIRE(first.exit_code == 0);
    CHECK(run_cli("predict --model " + model + " --features " + ws.features + " --out " + out2)
              .exit_code == 0);

    const std::string csv = testutil::read_text_file(out1);
    CHECK(csv.rfind("id,label,predicted\n", 0) == 0);
    CHECK(count_lines(csv) == 13);
    // Training-set predictions on separable synthetic data: every row's
    // predicted label matches its true label.
    int matches = 0;
    std::size_t start = csv.find('\n') + 1;  // skip the header
    while (start < csv.size()) {
        std::size_t end = csv.find('\n', start);
        const std::string line = csv.substr(start, end - start);
        const std::size_t first = line.find(',');
        const std::size_t second = line.find(',', first + 1);
        REQUIRE(second != std::string::npos);
        if (line.substr(first + 1, second - first - 1) == line.substr(second + 1)) {
            ++matches;
        }
        start = end + 1;
    }
    CHECK(matches == 12);
    CHECK(csv == testutil::read_text_file(out2));
}

TEST_CASE("a corrupt model file is a clean data error") {
    const SharedDataset& ws = shared();
    const std::string model = ws.dir.file("tamper_model.txt");
    REQUIRE(run_cli("train --config " + ws.config + " --features " + ws.features + " --out " +
                    model)
                .exit_code == 0);
    std::string text = testutil::read_text_file(model);
    text.replace(text.find("bruxforest 1"), 12, "bruxforest 9");
    const std::string bad = ws.dir.file("bad_model.txt");
    testutil::write_text_file(bad, text);

    const CliResult result = run_cli("predict --model " + bad + " --features " + ws.features +
                                     " --out " + ws.dir.file("unused_pred.csv"));
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("error") != std::string::npos);
}

TEST_CASE("evaluate writes the report, echoes the config, and prints pooled accuracy") {
    const SharedDataset& ws = shared();
    const std::string report_path = ws.dir.file("report.txt");
    const std::string importance_path = ws.dir.file("importance.txt");
    const CliResult result =
        run_cli("evaluate --config " + ws.config + " --features " + ws.features + " --out " +
                report_path + " --importance " + importance_path);
    REQUIRE(result.exit_code == 0);
    CHECK(result.output.find("pooled accuracy") != std::string::npos);

    const std::string report = testutil::read_text_file(report_path);
    CHECK(report.rfind("bruxeval 1\n", 0) == 0);
    CHECK(report.find("\nfolds 3\n") != std::string::npos);
    CHECK(report.find("\nn_samples 12\n") != std::string::npos);
    CHECK(report.find("pooled.accuracy ") != std::string::npos);
    CHECK(report.find("config.begin") != std::string::npos);
    CHECK(report.find("duration_s = 1") != std::string::npos);  // the echoed config
    CHECK(report.find("config.end") != std::string::npos);

    const std::string importance = testutil::read_text_file(importance_path);
    CHECK(count_lines(importance) == 11);
    CHECK(importance.find("band_energy_5_10 ") != std::string::npos);
}

TEST_CASE("evaluate reruns identically and the seed override changes the run") {
    const SharedDataset& ws = shared();
    const std::string a = ws.dir.file("report_a.txt");
    const std::string b = ws.dir.file("report_b.txt");
    const std::string c = ws.dir.file("report_c.txt");
    REQUIRE(run_cli("evaluate --config " + ws.config + " --features " + ws.features + " --out " +
                    a)
                .exit_code == 0);
    REQUIRE(run_cli("evaluate --config " + ws.config + " --features " + ws.features + " --out " +
                    b)
                .exit_code == 0);
    REQUIRE(run_cli("evaluate --config " + ws.config + " --seed 99 --features " + ws.features +
                    " --out " + c)
                .exit_code == 0);
    CHECK(testutil::read_text_file(a) == testutil::read_text_file(b));
    CHECK(testutil::read_text_file(a) != testutil::read_text_file(c));
    CHECK(testutil::read_text_file(c).find("\nseed 99\n") != std::string::npos);
}

TEST_CASE("a feature CSV with a missing column is a data error") {
    const SharedDataset& ws = shared();
    std::string csv = testutil::read_text_file(ws.features);
    csv.replace(csv.find(",n_below_thresh"), 15, "");  // break the header
    const std::string path = ws.dir.file("short_header.csv");
    testutil::write_text_file(path, csv);

    const CliResult result = run_cli("evaluate --features " + path + " --out " +
                                     ws.dir.file("unused_report.txt"));
    CHECK(result.exit_code == 2);
}

}  // TEST_SUITE
