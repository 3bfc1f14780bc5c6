#pragma once

#include <complex>
#include <string>
#include <vector>

#include "brux/iq.hpp"

namespace brux {

// Range spectra of a recording: one unnormalized fast-time DFT per chirp.
// Row-major, one row per chirp, one column per range bin.
struct RangeSpectra {
    std::vector<std::complex<double>> spectra;
    int num_chirps = 0;
    int num_bins = 0;
    double range_resolution_m = 0.0;
    double slow_time_rate_hz = 0.0;

    std::complex<double>& at(int chirp, int bin) {
        return spectra[static_cast<std::size_t>(chirp) * static_cast<std::size_t>(num_bins) +
                       static_cast<std::size_t>(bin)];
    }
    const std::complex<double>& at(int chirp, int bin) const {
        return spectra[static_cast<std::size_t>(chirp) * static_cast<std::size_t>(num_bins) +
                       static_cast<std::size_t>(bin)];
    }
};

// Incoherently integrated power over a window of range bins;
// power[i] belongs to absolute bin index k_min + i.
struct PowerProfile {
    std::vector<double> power;
    int k_min = 0;
    int k_max = 0;
};

// Unwrapped phase at one range bin, sampled at the slow-time rate.
struct PhaseSeries {
    std::vector<double> phase_rad;
    int bin = 0;
    double slow_time_rate_hz = 0.0;
};

// First difference of a phase series; length is one less than the input.
struct PhaseDiffSeries {
    std::vector<double> diff_rad;
    double slow_time_rate_hz = 0.0;
};

struct PipelineOptions {
    double r_min_m = 0.3;   // search window for the reflection of interest
    double r_max_m = 0.8;
    bool hann_window = false;           // optional fast-time taper, off by default
    bool remove_static_clutter = false; // optional per-bin slow-time mean subtraction

    bool operator==(const PipelineOptions&) const = default;
};

// Per-chirp fast-time DFT. No window (unless hann_window), no zero padding,
// no normalization. range_resolution is c / (2 * bandwidth).
RangeSpectra range_fft(const IqFrame& frame, double bandwidth_hz, bool hann_window = false);

// Subtracts the slow-time mean of every range bin, suppressing returns from
// static reflectors while leaving motion-modulated components in place.
void remove_static_clutter(RangeSpectra& spectra);

// Sums |X_n(k)|^2 over chirps for bins k in [floor(r_min/dR), floor(r_max/dR)].
PowerProfile accumulate_power(const RangeSpectra& spectra, double r_min_m, double r_max_m);

// Index of the strongest bin in the profile (absolute bin index);
// ties resolve to the smallest index.
int locate_bin(const PowerProfile& profile);

// Sequential one-dimensional phase unwrapping: whenever a step between
// consecutive wrapped samples leaves (-pi, pi], a 2*pi multiple is added to
// restore continuity.
std::vector<double> unwrap_phase(const std::vector<double>& wrapped_rad);

// Four-quadrant phase at the selected bin, unwrapped along slow time.
// Raises ZeroMagnitudeBin if any chirp has an exactly-zero sample there.
PhaseSeries extract_phase(const RangeSpectra& spectra, int bin);

// First difference of the unwrapped phase; acts as a temporal high-pass that
// removes the static-range offset. Raises TooShort for fewer than 2 samples.
PhaseDiffSeries phase_difference(const PhaseSeries& phase);

// Intermediate products of process_recording, for inspection and debugging.
struct PipelineTrace {
    PowerProfile power;
    int selected_bin = 0;
    PhaseSeries phase;
    PhaseDiffSeries diff;
};

// Full range-domain chain: range_fft -> (optional clutter removal) ->
// accumulate_power -> locate_bin -> extract_phase -> phase_difference.
PhaseDiffSeries process_recording(const IqFrame& frame, double bandwidth_hz,
                                  const PipelineOptions& options = {},
                                  PipelineTrace* trace = nullptr);

// Writes the trace as plain-text columnar files <stem>_power.txt,
// <stem>_phase.txt and <stem>_diff.txt under directory.
void write_trace(const PipelineTrace& trace, const std::string& directory,
                 const std::string& stem);

}  // namespace brux
