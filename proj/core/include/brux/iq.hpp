#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace brux {

// Shape of a raw capture file: little-endian signed 16-bit I/Q pairs, the
// fast-time samples of a chirp stored contiguously, chirps back to back, and
// when several receive channels are present their samples interleaved per
// fast-time sample. Byte size of a capture is therefore
//   2 bytes * 2 components * num_chirps * samples_per_chirp * num_channels.
struct RawCaptureLayout {
    int num_chirps = 0;
    int samples_per_chirp = 0;
    int num_channels = 1;
    int selected_channel = 0;

    bool operator==(const RawCaptureLayout&) const = default;
};

// Complex baseband recording for one receive channel. data is row-major,
// one row per chirp (slow time), one column per fast-time sample. Values are
// dimensionless ADC counts.
struct IqFrame {
    std::vector<std::complex<double>> data;
    int num_chirps = 0;
    int samples_per_chirp = 0;
    double slow_time_rate_hz = 0.0;
    RawCaptureLayout layout;

    std::complex<double>& at(int chirp, int sample) {
        return data[static_cast<std::size_t>(chirp) * static_cast<std::size_t>(samples_per_chirp) +
                    static_cast<std::size_t>(sample)];
    }
    const std::complex<double>& at(int chirp, int sample) const {
        return data[static_cast<std::size_t>(chirp) * static_cast<std::size_t>(samples_per_chirp) +
                    static_cast<std::size_t>(sample)];
    }

    bool operator==(const IqFrame&) const = default;
};

// Decodes a raw capture into the frame for layout.selected_channel.
// Throws LengthMismatch when the byte count does not match the layout,
// ChannelOutOfRange when the selected channel is not present, and
// InvalidArgument for non-positive dimensions or rate.
IqFrame parse_raw(std::span<const std::uint8_t> bytes, const RawCaptureLayout& layout,
                  double slow_time_rate_hz);

// Encodes a single-channel frame back to raw bytes. Components are rounded
// half away from zero; any component that does not fit signed 16-bit raises
// SampleOverflow.
std::vector<std::uint8_t> write_raw(const IqFrame& frame);

}  // namespace brux
