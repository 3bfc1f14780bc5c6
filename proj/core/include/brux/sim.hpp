#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brux/iq.hpp"
#include "brux/types.hpp"

namespace brux {

// Radar and capture geometry for the synthetic echo generator.
struct RadarConfig {
    double carrier_freq_hz = 60e9;
    double bandwidth_hz = 4e9;
    int samples_per_chirp = 256;
    double slow_time_rate_hz = 200.0;
    double duration_s = 5.0;
    double target_range_m = 0.55;   // face standoff
    double snr_db = 20.0;           // per-sample SNR of the face return
    double target_amplitude = 2000.0;   // ADC counts of the face tone
    double clutter_range_m = 1.2;       // static reflector behind the subject
    double clutter_amplitude = 800.0;
    double dc_leakage_amplitude = 400.0;

    double wavelength_m() const { return kSpeedOfLightMps / carrier_freq_hz; }
    double range_resolution_m() const { return kSpeedOfLightMps / (2.0 * bandwidth_hz); }
    double max_range_m() const { return samples_per_chirp * range_resolution_m(); }
    int num_chirps() const;  // duration * rate; raises InvalidArgument if not an integer >= 2
    void validate() const;

    bool operator==(const RadarConfig&) const = default;
};

// Physical motion description of one recording. All displacements are meters
// along the line of sight. The seed drives every stochastic ingredient
// (cycle jitter, tremor walk, receiver noise) through independent substreams,
// so two scenarios that differ only in amplitudes produce identical
// realizations of the shared components.
struct MotionScenario {
    Label label = Label::NoGrinding;
    double mandible_freq_hz = 0.0;   // stick-slip repetition rate, 5-10 Hz when active
    double mandible_amp_m = 0.0;     // stick-slip swing (peak of the sawtooth)
    double mandible_jitter = 0.0;    // +/- fractional per-cycle period/amplitude jitter
    double masseter_freq_hz = 0.0;   // muscle-bulge rate, 0.5-1.5 Hz when active
    double masseter_amp_m = 0.0;     // sinusoid amplitude
    double respiration_freq_hz = 0.0;
    double respiration_amp_m = 0.0;
    double tremor_amp_m = 0.0;       // random-walk step scale (per 5 ms grid step)
    std::uint64_t rng_seed = 0;

    bool operator==(const MotionScenario&) const = default;
};

// Deterministic realization of a scenario's stochastic ingredients over
// [0, horizon]. The jittered stick-slip waveform is an asymmetric sawtooth
// (slow rise, fast slip) passed through an exact one-pole low-pass, evaluated
// segment-analytically, so values do not depend on any sampling grid. Values
// at a given t are identical for every horizon >= t.
class ScenarioRealization {
public:
    ScenarioRealization(const MotionScenario& scenario, double horizon_s);

    // Line-of-sight displacement in meters at time t (clamped to the horizon).
    double displacement(double t) const;

private:
    struct Segment {
        double t0 = 0.0, t1 = 0.0;  // time span
        double x0 = 0.0, slope = 0.0;  // linear sawtooth input on the span
        double y0 = 0.0;            // exact filter state at t0
    };

    MotionScenario scenario_;
    double horizon_s_ = 0.0;
    std::vector<Segment> segments_;     // mandible stick-slip, filtered
    std::vector<double> tremor_walk_;   // random walk on the fixed tremor grid

    double mandible_at(double t) const;
    double tremor_at(double t) const;
};

// Displacement of the scenario at time t >= 0 (meters). Deterministic in
// (scenario, t); a zero-amplitude scenario returns exactly 0.
double displacement_profile(const MotionScenario& scenario, double t);

// Synthesizes the complex baseband recording of the scenario: a fast-time
// tone whose range-FFT peak falls in the bin of target_range and whose
// slow-time phase is 4*pi*(R + d(t_n))/lambda, plus a static clutter tone, a
// DC leakage term, and complex white Gaussian noise set by snr_db. Samples
// are rounded to integers; AmplitudeOverflow when they leave the signed
// 16-bit range.
IqFrame synthesize(const MotionScenario& scenario, const RadarConfig& config);

// Uniform parameter intervals from which dataset scenarios are drawn.
// The intervals balance two pulls: grinding recordings must place clearly
// more phase-difference energy in the 5-10 Hz band than their matched quiet
// twins, while the classes overlap on raw motion magnitude (respiration and
// tremor are shared and sized so that quiet recordings reach the amplitude
// of weak grinding ones). That keeps band placement, not sheer amplitude,
// the decisive evidence.
struct ScenarioRanges {
    Interval mandible_freq_hz{5.0, 10.0};
    Interval mandible_amp_m{1.5e-4, 4.0e-4};
    Interval mandible_jitter{0.1, 0.3};
    Interval masseter_freq_hz{0.5, 1.5};
    Interval masseter_amp_m{1.0e-4, 3.0e-4};
    Interval respiration_freq_hz{0.2, 0.4};
    Interval respiration_amp_m{1.0e-4, 1.0e-3};
    Interval tremor_amp_m{3.0e-6, 1.0e-5};

    bool operator==(const ScenarioRanges&) const = default;
};

// Draws one scenario with the given label. Every parameter is sampled from
// its interval; NoGrinding then zeroes the two grinding amplitudes, so a
// grinding draw and a non-grinding draw from the same seed are matched in all
// shared components.
MotionScenario draw_scenario(const ScenarioRanges& ranges, Label label, std::uint64_t seed);

struct LabeledRecording {
    std::string id;
    MotionScenario scenario;
    IqFrame frame;
};

// Sample #index of the dataset seeded by master_seed: labels alternate
// (even = grinding), parameters and realization derive from
// (master_seed, index) alone, id is "rec_<index>".
LabeledRecording make_dataset_sample(int index, const RadarConfig& config,
                                     const ScenarioRanges& ranges, std::uint64_t master_seed);

// n_per_class recordings per label, interleaved, reproducible per sample.
std::vector<LabeledRecording> generate_dataset(int n_per_class, const RadarConfig& config,
                                               const ScenarioRanges& ranges,
                                               std::uint64_t master_seed);

}  // namespace brux
