#include <string>

#include <doctest.h>

#include "brux/config.hpp"
#include "brux/errors.hpp"
#include "support/test_util.hpp"

using brux::Errc;
using brux::RunConfig;
using testutil::error_code_of;

TEST_SUITE("config") {

TEST_CASE("the default configuration round-trips through its own echo") {
    const RunConfig defaults;
    const std::string text = brux::run_config_text(defaults);
    CHECK(brux::parse_run_config(text) == defaults);
}

TEST_CASE("a modified configuration round-trips through its own echo") {
    RunConfig config;
    config.seed = 777;
    config.radar.snr_db = 12.5;
    config.radar.duration_s = 2.5;
    config.scenario.mandible_freq_hz = {6.0, 9.0};
    config.scenario.tremor_amp_m = {1e-7, 3e-6};
    config.pipeline.hann_window = true;
    config.pipeline.remove_static_clutter = true;
    config.features.histogram_bins = 32;
    config.features.diff_threshold_rad = 0.05;
    config.forest.n_estimators = 45;
    config.forest.max_features_rule = brux::MaxFeaturesRule::Fixed;
    config.forest.max_features_k = 4;
    config.forest.max_depth = 12;
    config.eval_folds = 5;

    CHECK(brux::parse_run_config(brux::run_config_text(config)) == config);

    config.forest.max_features_rule = brux::MaxFeaturesRule::All;
    config.forest.max_features_k = 0;
    config.forest.max_depth = -1;
    CHECK(brux::parse_run_config(brux::run_config_text(config)) == config);
}

TEST_CASE("comments, blank lines and spacing are tolerated") {
    const std::string text =
        "# top comment\n"
        "\n"
        "[run]\n"
        "  seed   =  9   # trailing comment\n"
        "\n"
        "[forest]\n"
        "n_estimators=30\n";

    const RunConfig config = brux::parse_run_config(text);
    CHECK(config.seed == 9);
    CHECK(config.forest.n_estimators == 30);
    // Untouched settings keep their defaults.
    CHECK(config.eval_folds == 10);
    CHECK(config.radar.samples_per_chirp == 256);
}

TEST_CASE("unknown sections and keys are rejected loudly") {
    CHECK(error_code_of([&] { (void)brux::parse_run_config("[nope]\nx = 1\n"); }) ==
          Errc::BadConfig);
    CHECK(error_code_of([&] { (void)brux::parse_run_config("[run]\nspeed = 1\n"); }) ==
          Errc::BadConfig);
    CHECK(error_code_of([&] { (void)brux::parse_run_config("[radar]\nsnr = 20\n"); }) ==
          Errc::BadConfig);
    // Assignments before any section have no home.
    CHECK(error_code_of([&] { (void)brux::parse_run_config("seed = 1\n"); }) == Errc::BadConfig);
}

TEST_CASE("malformed values are rejected loudly") {
    CHECK(error_code_of([&] { (void)brux::parse_run_config("[run]\nseed = banana\n"); }) ==
          Errc::BadConfig);
    CHECK(error_code_of([&] { (void)brux::parse_run_config("[radar]\nsnr_db = 1 2 3\n"); }) ==
          Errc::BadConfig);
    // Intervals need exactly two numbers.
    CHECK(error_code_of([&] {
              (void)brux::parse_run_config("[scenario]\nmandible_freq_hz = 5\n");
          }) == Errc::BadConfig);
    CHECK(error_code_of([&] { (void)brux::parse_run_config("[run]\nseed\n"); }) == Errc::BadConfig);
    CHECK(error_code_of([&] { (void)brux::parse_run_config("[pipeline]\nhann_window = 2\n"); }) ==
          Errc::BadConfig);
    CHECK(error_code_of([&] {
              (void)brux::parse_run_config("[forest]\nmax_features = sometimes\n");
          }) == Errc::BadConfig);
}

TEST_CASE("configurations load from and save to files") {
    const testutil::TempDir dir("brux_config");

    RunConfig config;
    config.seed = 4242;
    config.radar.duration_s = 1.5;
    const auto path = dir.file("run.conf");
    brux::save_run_config(path, config);
    CHECK(brux::load_run_config(path) == config);

    CHECK(error_code_of([&] { (void)brux::load_run_config(dir.file("absent.conf")); }) ==
          Errc::IoError);

    // Parse errors from a file carry its path.
    const auto bad = dir.file("bad.conf");
    testutil::write_text_file(bad, "[run]\nseed = x\n");
    try {
        (void)brux::load_run_config(bad);
        FAIL("expected a config error");
    } catch (const brux::Error& e) {
        CHECK(e.code() == Errc::BadConfig);
        CHECK(std::string(e.what()).find("bad.conf") != std::string::npos);
    }
}

}  // TEST_SUITE("config")
