#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "brux/errors.hpp"
#include "brux/features.hpp"
#include "brux/pipeline.hpp"
#include "brux/sim.hpp"
#include "support/test_util.hpp"

using brux::Errc;
using brux::Label;
using brux::MotionScenario;
using brux::RadarConfig;
using brux::ScenarioRanges;
using testutil::error_code_of;

namespace {

constexpr double kPi = std::numbers::pi;

// Short capture used where full-length recordings would be wasteful.
RadarConfig small_config() {
    RadarConfig config;
    config.samples_per_chirp = 32;
    config.duration_s = 0.05;       // 10 chirps at 200 Hz
    config.clutter_range_m = 0.9;   // keep the reflector inside the 1.2 m span
    return config;
}

MotionScenario grinding_scenario(std::uint64_t seed) {
    MotionScenario s;
    s.label = Label::Grinding;
    s.mandible_freq_hz = 7.0;
    s.mandible_amp_m = 3.0e-4;
    s.mandible_jitter = 0.2;
    s.masseter_freq_hz = 1.0;
    s.masseter_amp_m = 4.0e-4;
    s.respiration_freq_hz = 0.3;
    s.respiration_amp_m = 1.0e-4;
    s.tremor_amp_m = 1.0e-6;
    s.rng_seed = seed;
    return s;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("zero-amplitude scenarios displace exactly nothing") {
    MotionScenario s;
    s.rng_seed = 123;
    for (const double t : {0.0, 0.1, 1.0, 4.99}) {
        CHECK(brux::displacement_profile(s, t) == 0.0);
    }
}

TEST_CASE("a lone muscle-bulge component is a pure sinusoid") {
    MotionScenario s;
    s.masseter_freq_hz = 1.0;
    s.masseter_amp_m = 2.5e-4;
    s.rng_seed = 9;

    for (const double t : {0.0, 0.125, 0.25, 0.4, 0.75, 1.3}) {
        const double expected = 2.5e-4 * std::sin(2.0 * kPi * t);
        CHECK(brux::displacement_profile(s, t) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("displacement does not depend on the evaluation horizon") {
    const MotionScenario s = grinding_scenario(77);
    const brux::ScenarioRealization long_run(s, 5.0);
    for (const double t : {0.0, 0.013, 0.5, 1.7, 3.2, 5.0}) {
        CHECK(long_run.displacement(t) == brux::displacement_profile(s, t));
    }
}

TEST_CASE("displacement is deterministic in the scenario seed") {
    const MotionScenario s = grinding_scenario(42);
    CHECK(brux::displacement_profile(s, 1.234) == brux::displacement_profile(s, 1.234));

    MotionScenario other = s;
    other.rng_seed = 43;
    CHECK(brux::displacement_profile(s, 1.234) != brux::displacement_profile(other, 1.234));
}

TEST_CASE("displacement scales linearly with the amplitudes") {
    const MotionScenario s = grinding_scenario(5);
    MotionScenario doubled = s;
    doubled.mandible_amp_m *= 2.0;
    doubled.masseter_amp_m *= 2.0;
    doubled.respiration_amp_m *= 2.0;
    doubled.tremor_amp_m *= 2.0;

    for (const double t : {0.1, 0.37, 0.9, 1.6}) {
        const double base = brux::displacement_profile(s, t);
        CHECK(brux::displacement_profile(doubled, t) == doctest::Approx(2.0 * base).epsilon(1e-9));
    }
}

TEST_CASE("stick-slip cycles rise slowly and slip quickly") {
    MotionScenario s;
    s.mandible_freq_hz = 5.0;     // 200 ms nominal period
    s.mandible_amp_m = 4.0e-4;
    s.mandible_jitter = 0.0;      // exact periodicity for this check
    s.rng_seed = 1;

    const brux::ScenarioRealization r(s, 1.0);
    // Sample one cycle densely; the rise occupies the first 80%.
    double slow_gain = 0.0;
    double fast_drop = 0.0;
    const double dt = 1e-3;
    for (double t = 0.2; t < 0.4 - dt / 2; t += dt) {
        const double step = r.displacement(t + dt) - r.displacement(t);
        if (t < 0.2 + 0.8 * 0.2 - 0.01) slow_gain += step;
        if (t >= 0.2 + 0.8 * 0.2) fast_drop += step;
    }
    CHECK(slow_gain > 2.0e-4);   // most of the swing accumulates on the rise
    CHECK(fast_drop < -2.0e-4);  // and is released on the slip
}

TEST_CASE("scenario validation rejects out-of-range parameters") {
    MotionScenario s = grinding_scenario(3);
    s.mandible_amp_m = -1.0;
    CHECK(error_code_of([&] { (void)brux::displacement_profile(s, 0.1); }) ==
          Errc::InvalidArgument);

    s = grinding_scenario(3);
    s.mandible_jitter = 1.5;
    CHECK(error_code_of([&] { (void)brux::displacement_profile(s, 0.1); }) ==
          Errc::InvalidArgument);

    s = grinding_scenario(3);
    CHECK(error_code_of([&] { (void)brux::displacement_profile(s, -0.1); }) ==
          Errc::InvalidArgument);
}

TEST_CASE("capture geometry must be self-consistent") {
    RadarConfig config = small_config();
    config.duration_s = 0.0333;  // 6.66 chirps
    CHECK(error_code_of([&] { (void)config.num_chirps(); }) == Errc::InvalidArgument);

    config = small_config();
    config.duration_s = 0.005;  // a single chirp
    CHECK(error_code_of([&] { (void)config.num_chirps(); }) == Errc::InvalidArgument);

    config = small_config();
    CHECK(config.num_chirps() == 10);

    config.target_range_m = 5.0;  // beyond the 32-bin unambiguous span
    CHECK(error_code_of([&] { config.validate(); }) == Errc::InvalidArgument);

    config = small_config();
    config.carrier_freq_hz = 0.0;
    CHECK(error_code_of([&] { config.validate(); }) == Errc::InvalidArgument);
}

TEST_CASE("synthesized frames have the declared shape and integer samples") {
    const RadarConfig config = small_config();
    const auto frame = brux::synthesize(grinding_scenario(11), config);

    CHECK(frame.num_chirps == 10);
    CHECK(frame.samples_per_chirp == 32);
    CHECK(frame.slow_time_rate_hz == 200.0);
    CHECK(frame.layout == brux::RawCaptureLayout{10, 32, 1, 0});
    REQUIRE(frame.data.size() == 320);
    for (const auto& v : frame.data) {
        CHECK(v.real() == std::round(v.real()));
        CHECK(v.imag() == std::round(v.imag()));
        CHECK(std::abs(v.real()) <= 32767.0);
        CHECK(std::abs(v.imag()) <= 32767.0);
    }
}

TEST_CASE("synthesis is deterministic in scenario and geometry") {
    const RadarConfig config = small_config();
    const MotionScenario s = grinding_scenario(21);
    CHECK(brux::synthesize(s, config) == brux::synthesize(s, config));

    MotionScenario other = s;
    other.rng_seed = 22;
    CHECK_FALSE(brux::synthesize(s, config) == brux::synthesize(other, config));
}

TEST_CASE("excessive gain is rejected rather than clipped") {
    RadarConfig config = small_config();
    config.target_amplitude = 40000.0;
    CHECK(error_code_of([&] { (void)brux::synthesize(grinding_scenario(2), config); }) ==
          Errc::AmplitudeOverflow);
}

TEST_CASE("the face return lands in the range bin of the configured standoff") {
    RadarConfig config;          // defaults: 256 samples, 0.55 m standoff
    config.duration_s = 0.25;    // 50 chirps is plenty for a peak check
    MotionScenario null_motion;
    null_motion.rng_seed = 31;

    brux::PipelineTrace trace;
    (void)brux::process_recording(brux::synthesize(null_motion, config), config.bandwidth_hz,
                                  {}, &trace);
    CHECK(trace.selected_bin == 14);  // floor(0.55 / 0.03747...)
}

TEST_CASE("with no motion the recovered series is flat at high snr") {
    RadarConfig config;
    config.duration_s = 1.0;
    config.snr_db = 30.0;
    MotionScenario null_motion;
    null_motion.rng_seed = 57;

    const auto diff = brux::process_recording(brux::synthesize(null_motion, config),
                                              config.bandwidth_hz);
    REQUIRE(diff.diff_rad.size() == 199);
    double mean = 0.0;
    for (const double d : diff.diff_rad) mean += d;
    mean /= static_cast<double>(diff.diff_rad.size());
    double var = 0.0;
    for (const double d : diff.diff_rad) var += (d - mean) * (d - mean);
    var /= static_cast<double>(diff.diff_rad.size());

    CHECK(std::abs(mean) < 1e-3);
    CHECK(var < 1e-4);
}

TEST_CASE("recovered phase tracks the line-of-sight displacement") {
    RadarConfig config;
    config.duration_s = 1.0;
    config.snr_db = 40.0;

    MotionScenario s;
    s.masseter_freq_hz = 1.0;
    s.masseter_amp_m = 2.5e-4;
    s.rng_seed = 77;

    brux::PipelineTrace trace;
    (void)brux::process_recording(brux::synthesize(s, config), config.bandwidth_hz, {}, &trace);

    const auto& phase = trace.phase.phase_rad;
    REQUIRE(phase.size() == 200);
    const double scale = 4.0 * kPi / config.wavelength_m();
    const double d0 = brux::displacement_profile(s, 0.0);
    for (int n = 0; n < 200; ++n) {
        const double t_n = n / config.slow_time_rate_hz;
        const double expected = scale * (brux::displacement_profile(s, t_n) - d0);
        const double recovered = phase[static_cast<std::size_t>(n)] - phase[0];
        CHECK(std::abs(recovered - expected) < 5e-3);
    }
}

TEST_CASE("matched draws differ only in the grinding musculature") {
    const ScenarioRanges ranges;
    const auto grinding = brux::draw_scenario(ranges, Label::Grinding, 99);
    const auto quiet = brux::draw_scenario(ranges, Label::NoGrinding, 99);

    CHECK(grinding.label == Label::Grinding);
    CHECK(quiet.label == Label::NoGrinding);
    CHECK(quiet.mandible_amp_m == 0.0);
    CHECK(quiet.masseter_amp_m == 0.0);
    CHECK(grinding.mandible_amp_m > 0.0);
    CHECK(grinding.masseter_amp_m > 0.0);

    MotionScenario silenced = grinding;
    silenced.label = Label::NoGrinding;
    silenced.mandible_amp_m = 0.0;
    silenced.masseter_amp_m = 0.0;
    CHECK(silenced == quiet);

    // Shared components come from independent substreams, so silencing the
    // grinding amplitudes reproduces the quiet recording bit for bit.
    const RadarConfig config = small_config();
    CHECK(brux::synthesize(silenced, config) == brux::synthesize(quiet, config));
}

TEST_CASE("drawn parameters respect their configured intervals") {
    ScenarioRanges ranges;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = brux::draw_scenario(ranges, Label::Grinding, seed);
        CHECK(s.mandible_freq_hz >= ranges.mandible_freq_hz.lo);
        CHECK(s.mandible_freq_hz < ranges.mandible_freq_hz.hi);
        CHECK(s.mandible_amp_m >= ranges.mandible_amp_m.lo);
        CHECK(s.mandible_amp_m < ranges.mandible_amp_m.hi);
        CHECK(s.mandible_jitter >= ranges.mandible_jitter.lo);
        CHECK(s.mandible_jitter < ranges.mandible_jitter.hi);
        CHECK(s.masseter_freq_hz >= ranges.masseter_freq_hz.lo);
        CHECK(s.masseter_freq_hz < ranges.masseter_freq_hz.hi);
        CHECK(s.masseter_amp_m >= ranges.masseter_amp_m.lo);
        CHECK(s.masseter_amp_m < ranges.masseter_amp_m.hi);
        CHECK(s.respiration_freq_hz >= ranges.respiration_freq_hz.lo);
        CHECK(s.respiration_freq_hz < ranges.respiration_freq_hz.hi);
        CHECK(s.respiration_amp_m >= ranges.respiration_amp_m.lo);
        CHECK(s.respiration_amp_m < ranges.respiration_amp_m.hi);
        CHECK(s.tremor_amp_m >= ranges.tremor_amp_m.lo);
        CHECK(s.tremor_amp_m < ranges.tremor_amp_m.hi);
    }
}

TEST_CASE("dataset samples alternate labels and reproduce individually") {
    const RadarConfig config = small_config();
    const ScenarioRanges ranges;
    const auto dataset = brux::generate_dataset(2, config, ranges, 1234);

    REQUIRE(dataset.size() == 4);
    CHECK(dataset[0].id == "rec_0000");
    CHECK(dataset[1].id == "rec_0001");
    CHECK(dataset[3].id == "rec_0003");
    CHECK(dataset[0].scenario.label == Label::Grinding);
    CHECK(dataset[1].scenario.label == Label::NoGrinding);
    CHECK(dataset[2].scenario.label == Label::Grinding);
    CHECK(dataset[3].scenario.label == Label::NoGrinding);

    const auto replay = brux::make_dataset_sample(1, config, ranges, 1234);
    CHECK(replay.id == dataset[1].id);
    CHECK(replay.scenario == dataset[1].scenario);
    CHECK(replay.frame == dataset[1].frame);

    const auto different = brux::make_dataset_sample(1, config, ranges, 1235);
    CHECK_FALSE(different.frame == dataset[1].frame);
}

TEST_CASE("grinding recordings carry more 5-10 hz energy than matched quiet ones") {
    RadarConfig config;
    config.duration_s = 2.5;  // 500 chirps: enough spectral resolution
    const ScenarioRanges ranges;

    for (std::uint64_t seed = 100; seed < 105; ++seed) {
        const auto grinding = brux::draw_scenario(ranges, Label::Grinding, seed);
        const auto quiet = brux::draw_scenario(ranges, Label::NoGrinding, seed);

        const auto fg = brux::extract_features(
            brux::process_recording(brux::synthesize(grinding, config), config.bandwidth_hz));
        const auto fq = brux::extract_features(
            brux::process_recording(brux::synthesize(quiet, config), config.bandwidth_hz));
        CHECK(fg.band_energy_5_10 > fq.band_energy_5_10);
    }
}

}  // TEST_SUITE("sim")
