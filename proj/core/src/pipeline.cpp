#include "brux/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>

#include "brux/errors.hpp"
#include "brux/fft.hpp"
#include "brux/types.hpp"

namespace brux {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Maps a step into (-pi, pi]; the boundary deliberately keeps +pi.
double principal_step(double step) {
    double m = std::fmod(step + kPi, kTwoPi);
    if (m <= 0.0) m += kTwoPi;
    return m - kPi;
}

std::ofstream open_text(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(Errc::IoError, "cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

RangeSpectra range_fft(const IqFrame& frame, double bandwidth_hz, bool hann_window) {
    if (!(bandwidth_hz > 0.0)) raise(Errc::InvalidArgument, "bandwidth must be positive");
    if (frame.samples_per_chirp < 2) {
        raise(Errc::TooShort, "need at least 2 fast-time samples per chirp");
    }
    if (frame.data.size() != static_cast<std::size_t>(frame.num_chirps) *
                                 static_cast<std::size_t>(frame.samples_per_chirp)) {
        raise(Errc::InvalidArgument, "frame data size does not match its dimensions");
    }

    const int n_s = frame.samples_per_chirp;
    std::vector<double> window;
    if (hann_window) {
        window.resize(static_cast<std::size_t>(n_s));
        for (int m = 0; m < n_s; ++m) {
            window[static_cast<std::size_t>(m)] =
                0.5 * (1.0 - std::cos(kTwoPi * m / static_cast<double>(n_s - 1)));
        }
    }

    RangeSpectra out;
    out.num_chirps = frame.num_chirps;
    out.num_bins = n_s;
    out.range_resolution_m = kSpeedOfLightMps / (2.0 * bandwidth_hz);
    out.slow_time_rate_hz = frame.slow_time_rate_hz;
    out.spectra.resize(frame.data.size());

    std::vector<std::complex<double>> chirp(static_cast<std::size_t>(n_s));
    for (int n = 0; n < frame.num_chirps; ++n) {
        for (int m = 0; m < n_s; ++m) {
            chirp[static_cast<std::size_t>(m)] = frame.at(n, m);
            if (hann_window) chirp[static_cast<std::size_t>(m)] *= window[static_cast<std::size_t>(m)];
        }
        const auto spectrum = dft(chirp);
        for (int k = 0; k < n_s; ++k) out.at(n, k) = spectrum[static_cast<std::size_t>(k)];
    }
    return out;
}

void remove_static_clutter(RangeSpectra& spectra) {
    if (spectra.num_chirps < 1) return;
    for (int k = 0; k < spectra.num_bins; ++k) {
        std::complex<double> mean(0.0, 0.0);
        for (int n = 0; n < spectra.num_chirps; ++n) mean += spectra.at(n, k);
        mean /= static_cast<double>(spectra.num_chirps);
        for (int n = 0; n < spectra.num_chirps; ++n) spectra.at(n, k) -= mean;
    }
}

PowerProfile accumulate_power(const RangeSpectra& spectra, double r_min_m, double r_max_m) {
    if (!(r_min_m >= 0.0) || !(r_max_m > r_min_m)) {
        raise(Errc::WindowOutOfRange,
              "range window [" + format_double(r_min_m) + ", " + format_double(r_max_m) +
                  "] is not an increasing non-negative interval");
    }
    const double d_r = spectra.range_resolution_m;
    const int k_min = static_cast<int>(std::floor(r_min_m / d_r));
    const int k_max = static_cast<int>(std::floor(r_max_m / d_r));
    if (k_max >= spectra.num_bins) {
        raise(Errc::WindowOutOfRange, "window upper bin " + std::to_string(k_max) +
                                          " exceeds last range bin " +
                                          std::to_string(spectra.num_bins - 1));
    }

    PowerProfile profile;
    profile.k_min = k_min;
    profile.k_max = k_max;
    profile.power.assign(static_cast<std::size_t>(k_max - k_min + 1), 0.0);
    for (int k = k_min; k <= k_max; ++k) {
        double acc = 0.0;
        for (int n = 0; n < spectra.num_chirps; ++n) acc += std::norm(spectra.at(n, k));
        profile.power[static_cast<std::size_t>(k - k_min)] = acc;
    }
    return profile;
}

int locate_bin(const PowerProfile& profile) {
    if (profile.power.empty()) raise(Errc::WindowOutOfRange, "empty power profile");
    std::size_t best = 0;
    for (std::size_t i = 1; i < profile.power.size(); ++i) {
        if (profile.power[i] > profile.power[best]) best = i;  // strict: first max wins
    }
    return profile.k_min + static_cast<int>(best);
}

std::vector<double> unwrap_phase(const std::vector<double>& wrapped_rad) {
    std::vector<double> out(wrapped_rad.size());
    if (wrapped_rad.empty()) return out;
    out[0] = wrapped_rad[0];
    for (std::size_t n = 1; n < wrapped_rad.size(); ++n) {
        const double step = wrapped_rad[n] - wrapped_rad[n - 1];
        out[n] = out[n - 1] + principal_step(step);
    }
    return out;
}

PhaseSeries extract_phase(const RangeSpectra& spectra, int bin) {
    if (bin < 0 || bin >= spectra.num_bins) {
        raise(Errc::WindowOutOfRange, "bin " + std::to_string(bin) + " outside spectra");
    }
    std::vector<double> wrapped(static_cast<std::size_t>(spectra.num_chirps));
    for (int n = 0; n < spectra.num_chirps; ++n) {
        const std::complex<double> v = spectra.at(n, bin);
        if (v.real() == 0.0 && v.imag() == 0.0) {
            raise(Errc::ZeroMagnitudeBin, "chirp " + std::to_string(n) + " has zero magnitude at bin " +
                                              std::to_string(bin));
        }
        wrapped[static_cast<std::size_t>(n)] = std::atan2(v.imag(), v.real());
    }

    PhaseSeries series;
    series.bin = bin;
    series.slow_time_rate_hz = spectra.slow_time_rate_hz;
    series.phase_rad = unwrap_phase(wrapped);
    return series;
}

PhaseDiffSeries phase_difference(const PhaseSeries& phase) {
    if (phase.phase_rad.size() < 2) {
        raise(Errc::TooShort, "phase series of length " + std::to_string(phase.phase_rad.size()) +
                                  " has no differences");
    }
    PhaseDiffSeries diff;
    diff.slow_time_rate_hz = phase.slow_time_rate_hz;
    diff.diff_rad.resize(phase.phase_rad.size() - 1);
    for (std::size_t n = 1; n < phase.phase_rad.size(); ++n) {
        diff.diff_rad[n - 1] = phase.phase_rad[n] - phase.phase_rad[n - 1];
    }
    return diff;
}

PhaseDiffSeries process_recording(const IqFrame& frame, double bandwidth_hz,
                                  const PipelineOptions& options, PipelineTrace* trace) {
    RangeSpectra spectra = range_fft(frame, bandwidth_hz, options.hann_window);
    if (options.remove_static_clutter) remove_static_clutter(spectra);
    PowerProfile profile = accumulate_power(spectra, options.r_min_m, options.r_max_m);
    const int bin = locate_bin(profile);
    PhaseSeries phase = extract_phase(spectra, bin);
    PhaseDiffSeries diff = phase_difference(phase);
    if (trace) {
        trace->power = std::move(profile);
        trace->selected_bin = bin;
        trace->phase = std::move(phase);
        trace->diff = diff;
    }
    return diff;
}

void write_trace(const PipelineTrace& trace, const std::string& directory,
                 const std::string& stem) {
    const std::filesystem::path dir(directory);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    auto power = open_text(dir / (stem + "_power.txt"));
    power << "# bin power\n";
    for (std::size_t i = 0; i < trace.power.power.size(); ++i) {
        power << (trace.power.k_min + static_cast<int>(i)) << ' '
              << format_double(trace.power.power[i]) << '\n';
    }

    auto phase = open_text(dir / (stem + "_phase.txt"));
    phase << "# chirp time_s phase_rad (bin " << trace.selected_bin << ")\n";
    for (std::size_t n = 0; n < trace.phase.phase_rad.size(); ++n) {
        phase << n << ' '
              << format_double(static_cast<double>(n) / trace.phase.slow_time_rate_hz) << ' '
              << format_double(trace.phase.phase_rad[n]) << '\n';
    }

    auto diff = open_text(dir / (stem + "_diff.txt"));
    diff << "# interval time_s diff_rad\n";
    for (std::size_t n = 0; n < trace.diff.diff_rad.size(); ++n) {
        diff << n << ' '
             << format_double(static_cast<double>(n + 1) / trace.diff.slow_time_rate_hz) << ' '
             << format_double(trace.diff.diff_rad[n]) << '\n';
    }
}

}  // namespace brux
