#pragma once

#include <cstdint>
#include <string>

#include "brux/features.hpp"
#include "brux/forest.hpp"
#include "brux/pipeline.hpp"
#include "brux/sim.hpp"

namespace brux {

// Every knob of a full run, with working defaults. The single seed drives
// dataset generation, fold shuffling and tree training; each consumer derives
// its own substreams from it.
struct RunConfig {
    std::uint64_t seed = 42;
    RadarConfig radar;
    ScenarioRanges scenario;
    PipelineOptions pipeline;
    FeatureOptions features;
    ForestParams forest;  // the seed field is overwritten with `seed` at use time
    int eval_folds = 10;

    bool operator==(const RunConfig&) const = default;
};

// Plain-text key-value configuration:
//   - '#' starts a comment, blank lines are skipped
//   - '[section]' opens a section, 'key = value' assigns within it
//   - intervals are written as two numbers, e.g. 'mandible_freq_hz = 5 10'
// Unknown sections or keys are BadConfig errors, so typos never pass silently.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Full echo of every setting, parseable by parse_run_config. Reports embed
// this so any run is reproducible from its own output.
std::string run_config_text(const RunConfig& config);
void save_run_config(const std::string& path, const RunConfig& config);

}  // namespace brux
