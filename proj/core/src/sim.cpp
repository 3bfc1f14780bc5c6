#include "brux/sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include "brux/errors.hpp"
#include "brux/rng.hpp"

namespace brux {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Stick-slip shape: the jaw loads slowly over most of the cycle and releases
// fast over the remainder.
constexpr double kRiseFraction = 0.8;

// One-pole low-pass that rounds the slip edge; cutoff ~25 Hz keeps the 5-10 Hz
// fundamentals intact while removing the unphysical discontinuity.
constexpr double kSmoothingTauS = 1.0 / (kTwoPi * 25.0);

// Fixed grid for the tremor random walk, independent of the capture's
// slow-time rate so displacement values never depend on how they are sampled.
constexpr double kTremorGridDtS = 0.005;

// Substream tags for the scenario seed.
constexpr std::uint64_t kJitterStream = 1;
constexpr std::uint64_t kTremorStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

void validate_scenario(const MotionScenario& s) {
    if (s.mandible_amp_m < 0 || s.masseter_amp_m < 0 || s.respiration_amp_m < 0 ||
        s.tremor_amp_m < 0) {
        raise(Errc::InvalidArgument, "scenario amplitudes must be non-negative");
    }
    if (s.mandible_freq_hz < 0 || s.masseter_freq_hz < 0 || s.respiration_freq_hz < 0) {
        raise(Errc::InvalidArgument, "scenario frequencies must be non-negative");
    }
    if (s.mandible_jitter < 0 || s.mandible_jitter > 1) {
        raise(Errc::InvalidArgument, "mandible jitter must lie in [0, 1]");
    }
}

}  // namespace

int RadarConfig::num_chirps() const {
    const double n = duration_s * slow_time_rate_hz;
    const double rounded = std::round(n);
    if (std::abs(n - rounded) > 1e-6 || rounded < 2.0) {
        raise(Errc::InvalidArgument,
              "duration x slow-time rate must be an integer chirp count >= 2, got " +
                  format_double(n));
    }
    return static_cast<int>(rounded);
}

void RadarConfig::validate() const {
    if (!(carrier_freq_hz > 0)) raise(Errc::InvalidArgument, "carrier frequency must be positive");
    if (!(bandwidth_hz > 0)) raise(Errc::InvalidArgument, "bandwidth must be positive");
    if (samples_per_chirp < 2) raise(Errc::InvalidArgument, "need at least 2 samples per chirp");
    if (!(slow_time_rate_hz > 0)) raise(Errc::InvalidArgument, "slow-time rate must be positive");
    if (!(duration_s > 0)) raise(Errc::InvalidArgument, "duration must be positive");
    (void)num_chirps();
    if (!(target_range_m > 0) || target_range_m >= max_range_m()) {
        raise(Errc::InvalidArgument, "target range " + format_double(target_range_m) +
                                         " m outside the unambiguous span (0, " +
                                         format_double(max_range_m()) + ") m");
    }
    if (clutter_range_m < 0 || clutter_range_m >= max_range_m()) {
        raise(Errc::InvalidArgument, "clutter range outside the unambiguous span");
    }
    if (target_amplitude < 0 || clutter_amplitude < 0 || dc_leakage_amplitude < 0) {
        raise(Errc::InvalidArgument, "amplitudes must be non-negative");
    }
}

ScenarioRealization::ScenarioRealization(const MotionScenario& scenario, double horizon_s)
    : scenario_(scenario), horizon_s_(horizon_s) {
    validate_scenario(scenario);
    if (!(horizon_s >= 0) || !std::isfinite(horizon_s)) {
        raise(Errc::InvalidArgument, "realization horizon must be finite and non-negative");
    }

    // Jittered stick-slip cycle schedule. Per-cycle uniform jitter scales the
    // nominal period and amplitude; amplitudes are generated one cycle ahead
    // because each slip lands on the next cycle's start level, keeping the
    // sawtooth continuous.
    if (scenario.mandible_freq_hz > 0) {
        SeededRng jitter(derive_seed(scenario.rng_seed, kJitterStream));
        const double nominal_period = 1.0 / scenario.mandible_freq_hz;
        auto next_cycle = [&]() {
            const double period =
                nominal_period * std::max(0.1, 1.0 + scenario.mandible_jitter * jitter.uniform(-1.0, 1.0));
            const double amp =
                scenario.mandible_amp_m *
                std::max(0.0, 1.0 + scenario.mandible_jitter * jitter.uniform(-1.0, 1.0));
            return std::pair<double, double>(period, amp);
        };

        auto [period, amp] = next_cycle();
        double t = 0.0;
        // The filter starts settled at the sawtooth's initial level, so there
        // is no artificial onset transient.
        double y = -0.5 * amp;
        while (t <= horizon_s) {
            const auto [next_period, next_amp] = next_cycle();
            const double t_slip = t + kRiseFraction * period;
            const double t_end = t + period;

            Segment rise;
            rise.t0 = t;
            rise.t1 = t_slip;
            rise.x0 = -0.5 * amp;
            rise.slope = amp / (kRiseFraction * period);
            rise.y0 = y;
            segments_.push_back(rise);

            // Exact one-pole response at the end of a linear segment:
            // y(t1) = x(t1) - b*tau + (y0 - x0 + b*tau) * exp(-(t1-t0)/tau).
            auto propagate = [](const Segment& s) {
                const double span = s.t1 - s.t0;
                const double x1 = s.x0 + s.slope * span;
                return x1 - s.slope * kSmoothingTauS +
                       (s.y0 - s.x0 + s.slope * kSmoothingTauS) * std::exp(-span / kSmoothingTauS);
            };
            y = propagate(rise);

            Segment slip;
            slip.t0 = t_slip;
            slip.t1 = t_end;
            slip.x0 = 0.5 * amp;
            slip.slope = (-0.5 * next_amp - 0.5 * amp) / (t_end - t_slip);
            slip.y0 = y;
            segments_.push_back(slip);
            y = propagate(slip);

            t = t_end;
            period = next_period;
            amp = next_amp;
        }
    }

    // Tremor random walk on the fixed grid, linearly interpolated on query.
    {
        SeededRng tremor(derive_seed(scenario.rng_seed, kTremorStream));
        const std::size_t steps = static_cast<std::size_t>(std::ceil(horizon_s / kTremorGridDtS)) + 2;
        tremor_walk_.resize(steps + 1);
        tremor_walk_[0] = 0.0;
        for (std::size_t j = 0; j < steps; ++j) {
            tremor_walk_[j + 1] = tremor_walk_[j] + scenario.tremor_amp_m * tremor.gaussian();
        }
    }
}

double ScenarioRealization::mandible_at(double t) const {
    if (segments_.empty()) return 0.0;
    // Find the segment containing t (they tile [0, >horizon] contiguously).
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double value, const Segment& s) { return value < s.t0; });
    const Segment& s = it == segments_.begin() ? segments_.front() : *(it - 1);
    const double dt = std::clamp(t, s.t0, s.t1) - s.t0;
    const double x = s.x0 + s.slope * dt;
    return x - s.slope * kSmoothingTauS +
           (s.y0 - s.x0 + s.slope * kSmoothingTauS) * std::exp(-dt / kSmoothingTauS);
}

double ScenarioRealization::tremor_at(double t) const {
    const double pos = t / kTremorGridDtS;
    std::size_t j = static_cast<std::size_t>(std::max(0.0, std::floor(pos)));
    if (j + 1 >= tremor_walk_.size()) j = tremor_walk_.size() - 2;
    const double frac = std::clamp(pos - static_cast<double>(j), 0.0, 1.0);
    return tremor_walk_[j] + (tremor_walk_[j + 1] - tremor_walk_[j]) * frac;
}

double ScenarioRealization::displacement(double t) const {
    const double tc = std::clamp(t, 0.0, horizon_s_);
    double d = 0.0;
    if (scenario_.masseter_amp_m > 0 && scenario_.masseter_freq_hz > 0) {
        d += scenario_.masseter_amp_m * std::sin(kTwoPi * scenario_.masseter_freq_hz * tc);
    }
    d += mandible_at(tc);
    if (scenario_.respiration_amp_m > 0 && scenario_.respiration_freq_hz > 0) {
        d += scenario_.respiration_amp_m * std::sin(kTwoPi * scenario_.respiration_freq_hz * tc);
    }
    d += tremor_at(tc);
    return d;
}

double displacement_profile(const MotionScenario& scenario, double t) {
    if (!(t >= 0) || !std::isfinite(t)) {
        raise(Errc::InvalidArgument, "time must be finite and non-negative");
    }
    return ScenarioRealization(scenario, t).displacement(t);
}

IqFrame synthesize(const MotionScenario& scenario, const RadarConfig& config) {
    config.validate();
    validate_scenario(scenario);

    const int n_c = config.num_chirps();
    const int n_s = config.samples_per_chirp;
    const double d_r = config.range_resolution_m();
    const double lambda = config.wavelength_m();
    const double phase_scale = 4.0 * kPi / lambda;

    const int target_bin = static_cast<int>(std::floor(config.target_range_m / d_r));
    const int clutter_bin = static_cast<int>(std::floor(config.clutter_range_m / d_r));

    // Per-fast-time-sample tone tables. The face tone sits exactly on its
    // range bin so the selected bin carries the motion phase undiluted.
    std::vector<std::complex<double>> target_tone(static_cast<std::size_t>(n_s));
    std::vector<std::complex<double>> static_return(static_cast<std::size_t>(n_s));
    const std::complex<double> clutter_rot =
        config.clutter_amplitude *
        std::polar(1.0, std::fmod(phase_scale * config.clutter_range_m, kTwoPi));
    for (int m = 0; m < n_s; ++m) {
        const double cell = kTwoPi * static_cast<double>(m) / static_cast<double>(n_s);
        target_tone[static_cast<std::size_t>(m)] = std::polar(1.0, cell * target_bin);
        static_return[static_cast<std::size_t>(m)] =
            clutter_rot * std::polar(1.0, cell * clutter_bin) + config.dc_leakage_amplitude;
    }

    // Complex white noise with total per-sample variance set by the
    // face-return SNR.
    const double noise_sigma =
        config.target_amplitude > 0
            ? config.target_amplitude * std::pow(10.0, -config.snr_db / 20.0)
            : 0.0;
    const double component_sigma = noise_sigma / std::sqrt(2.0);
    SeededRng noise(derive_seed(scenario.rng_seed, kNoiseStream));

    const ScenarioRealization realization(scenario, config.duration_s);

    IqFrame frame;
    frame.num_chirps = n_c;
    frame.samples_per_chirp = n_s;
    frame.slow_time_rate_hz = config.slow_time_rate_hz;
    frame.layout = RawCaptureLayout{n_c, n_s, 1, 0};
    frame.data.resize(static_cast<std::size_t>(n_c) * static_cast<std::size_t>(n_s));

    for (int n = 0; n < n_c; ++n) {
        const double t_n = static_cast<double>(n) / config.slow_time_rate_hz;
        const double phi =
            phase_scale * (config.target_range_m + realization.displacement(t_n));
        const std::complex<double> rot =
            config.target_amplitude * std::polar(1.0, std::fmod(phi, kTwoPi));
        for (int m = 0; m < n_s; ++m) {
            std::complex<double> v =
                rot * target_tone[static_cast<std::size_t>(m)] + static_return[static_cast<std::size_t>(m)];
            if (component_sigma > 0) {
                const auto [g_i, g_q] = noise.gaussian_pair();
                v += std::complex<double>(component_sigma * g_i, component_sigma * g_q);
            }
            const double i_round = std::round(v.real());
            const double q_round = std::round(v.imag());
            if (i_round < -32768.0 || i_round > 32767.0 || q_round < -32768.0 ||
                q_round > 32767.0) {
                raise(Errc::AmplitudeOverflow,
                      "sample at chirp " + std::to_string(n) + ", index " + std::to_string(m) +
                          " exceeds the signed 16-bit range at the configured gain");
            }
            frame.at(n, m) = std::complex<double>(i_round, q_round);
        }
    }
    return frame;
}

MotionScenario draw_scenario(const ScenarioRanges& ranges, Label label, std::uint64_t seed) {
    SeededRng rng(derive_seed(seed, 10));

    MotionScenario s;
    s.label = label;
    s.mandible_freq_hz = rng.uniform(ranges.mandible_freq_hz.lo, ranges.mandible_freq_hz.hi);
    s.mandible_amp_m = rng.uniform(ranges.mandible_amp_m.lo, ranges.mandible_amp_m.hi);
    s.mandible_jitter = rng.uniform(ranges.mandible_jitter.lo, ranges.mandible_jitter.hi);
    s.masseter_freq_hz = rng.uniform(ranges.masseter_freq_hz.lo, ranges.masseter_freq_hz.hi);
    s.masseter_amp_m = rng.uniform(ranges.masseter_amp_m.lo, ranges.masseter_amp_m.hi);
    s.respiration_freq_hz = rng.uniform(ranges.respiration_freq_hz.lo, ranges.respiration_freq_hz.hi);
    s.respiration_amp_m = rng.uniform(ranges.respiration_amp_m.lo, ranges.respiration_amp_m.hi);
    s.tremor_amp_m = rng.uniform(ranges.tremor_amp_m.lo, ranges.tremor_amp_m.hi);
    s.rng_seed = derive_seed(seed, 11);

    // The two classes share every involuntary component; the label only
    // switches the grinding musculature on or off.
    if (label == Label::NoGrinding) {
        s.mandible_amp_m = 0.0;
        s.masseter_amp_m = 0.0;
    }
    return s;
}

LabeledRecording make_dataset_sample(int index, const RadarConfig& config,
                                     const ScenarioRanges& ranges, std::uint64_t master_seed) {
    if (index < 0) raise(Errc::InvalidArgument, "sample index must be non-negative");
    const Label label = index % 2 == 0 ? Label::Grinding : Label::NoGrinding;
    const std::uint64_t sample_seed = derive_seed(master_seed, static_cast<std::uint64_t>(index));

    LabeledRecording rec;
    char id[32];
    std::snprintf(id, sizeof(id), "rec_%04d", index);
    rec.id = id;
    rec.scenario = draw_scenario(ranges, label, sample_seed);
    rec.frame = synthesize(rec.scenario, config);
    return rec;
}

std::vector<LabeledRecording> generate_dataset(int n_per_class, const RadarConfig& config,
                                               const ScenarioRanges& ranges,
                                               std::uint64_t master_seed) {
    if (n_per_class < 1) raise(Errc::InvalidArgument, "need at least one recording per class");
    std::vector<LabeledRecording> dataset;
    dataset.reserve(static_cast<std::size_t>(2 * n_per_class));
    for (int i = 0; i < 2 * n_per_class; ++i) {
        dataset.push_back(make_dataset_sample(i, config, ranges, master_seed));
    }
    return dataset;
}

}  // namespace brux
