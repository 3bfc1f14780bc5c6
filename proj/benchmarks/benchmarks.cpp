// Microbenchmarks for the hot paths: echo synthesis, the range-domain
// pipeline, feature extraction, and forest training/prediction. Sizes match
// the defaults used by the CLI (1000 chirps x 256 samples per recording,
// 180-row training tables), so the numbers translate directly to end-to-end
// cost per recording.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "brux/features.hpp"
#include "brux/forest.hpp"
#include "brux/pipeline.hpp"
#include "brux/rng.hpp"
#include "brux/sim.hpp"

namespace {

const brux::RadarConfig& default_radar() {
    static const brux::RadarConfig config;
    return config;
}

brux::MotionScenario grinding_scenario() {
    return brux::draw_scenario(brux::ScenarioRanges{}, brux::Label::Grinding, 1);
}

const brux::IqFrame& prebuilt_frame() {
    static const brux::IqFrame frame = brux::synthesize(grinding_scenario(), default_radar());
    return frame;
}

const brux::PhaseDiffSeries& prebuilt_series() {
    static const brux::PhaseDiffSeries series =
        brux::process_recording(prebuilt_frame(), default_radar().bandwidth_hz);
    return series;
}

// Two noisy class clusters with the training-table shape the CLI produces.
std::pair<brux::Matrix, std::vector<int>> training_table(int rows) {
    brux::SeededRng rng(99);
    brux::Matrix x = brux::Matrix::zeros(rows, brux::kNumFeatures);
    std::vector<int> y(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
        y[static_cast<std::size_t>(r)] = r % 2;
        for (int c = 0; c < brux::kNumFeatures; ++c) {
            x.at(r, c) = rng.gaussian() + (r % 2 == 0 ? 0.0 : 1.5);
        }
    }
    return {std::move(x), std::move(y)};
}

void bm_synthesize(benchmark::State& state) {
    const brux::MotionScenario scenario = grinding_scenario();
    for (auto _ : state) {
        benchmark::DoNotOptimize(brux::synthesize(scenario, default_radar()));
    }
}
BENCHMARK(bm_synthesize)->Unit(benchmark::kMillisecond);

void bm_range_fft(benchmark::State& state) {
    const brux::IqFrame& frame = prebuilt_frame();
    for (auto _ : state) {
        benchmark::DoNotOptimize(brux::range_fft(frame, default_radar().bandwidth_hz, true));
    }
}
BENCHMARK(bm_range_fft)->Unit(benchmark::kMillisecond);

void bm_process_recording(benchmark::State& state) {
    const brux::IqFrame& frame = prebuilt_frame();
    for (auto _ : state) {
        benchmark::DoNotOptimize(brux::process_recording(frame, default_radar().bandwidth_hz));
    }
}
BENCHMARK(bm_process_recording)->Unit(benchmark::kMillisecond);

void bm_extract_features(benchmark::State& state) {
    const brux::PhaseDiffSeries& series = prebuilt_series();
    for (auto _ : state) {
        benchmark::DoNotOptimize(brux::extract_features(series));
    }
}
BENCHMARK(bm_extract_features)->Unit(benchmark::kMicrosecond);

void bm_forest_fit(benchmark::State& state) {
    const auto [x, y] = training_table(180);
    brux::ForestParams params;
    params.n_estimators = static_cast<int>(state.range(0));
    params.seed = 4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(brux::fit(x, y, params));
    }
}
BENCHMARK(bm_forest_fit)->Arg(30)->Arg(90)->Unit(benchmark::kMillisecond);

void bm_forest_predict(benchmark::State& state) {
    const auto [x, y] = training_table(180);
    brux::ForestParams params;
    params.seed = 4;
    const brux::ForestModel model = brux::fit(x, y, params);
    for (auto _ : state) {
        benchmark::DoNotOptimize(brux::predict(model, x));
    }
}
BENCHMARK(bm_forest_predict)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
