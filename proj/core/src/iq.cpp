#include "brux/iq.hpp"

#include <cmath>
#include <string>

#include "brux/errors.hpp"

namespace brux {

namespace {

constexpr int kBytesPerComplexSample = 4;  // int16 I + int16 Q

std::int16_t decode_le16(const std::uint8_t* p) {
    return static_cast<std::int16_t>(static_cast<std::uint16_t>(p[0]) |
                                     (static_cast<std::uint16_t>(p[1]) << 8));
}

void encode_le16(std::int16_t v, std::vector<std::uint8_t>& out) {
    out.push_back(static_cast<std::uint8_t>(static_cast<std::uint16_t>(v) & 0xFF));
    out.push_back(static_cast<std::uint8_t>(static_cast<std::uint16_t>(v) >> 8));
}

std::int16_t round_to_int16(double v, std::size_t flat_index, const char* component) {
    const double rounded = std::round(v);  // halves away from zero
    if (!(rounded >= -32768.0 && rounded <= 32767.0)) {
        raise(Errc::SampleOverflow, std::string(component) + " component " +
                                        std::to_string(rounded) + " at sample " +
                                        std::to_string(flat_index) +
                                        " does not fit signed 16-bit");
    }
    return static_cast<std::int16_t>(rounded);
}

}  // namespace

IqFrame parse_raw(std::span<const std::uint8_t> bytes, const RawCaptureLayout& layout,
                  double slow_time_rate_hz) {
    if (layout.num_chirps < 1 || layout.samples_per_chirp < 1 || layout.num_channels < 1) {
        raise(Errc::InvalidArgument, "capture layout dimensions must be positive");
    }
    if (layout.selected_channel < 0 || layout.selected_channel >= layout.num_channels) {
        raise(Errc::ChannelOutOfRange,
              "selected channel " + std::to_string(layout.selected_channel) + " of " +
                  std::to_string(layout.num_channels));
    }
    if (!(slow_time_rate_hz > 0.0)) {
        raise(Errc::InvalidArgument, "slow-time rate must be positive");
    }

    const std::size_t expected = static_cast<std::size_t>(kBytesPerComplexSample) *
                                 static_cast<std::size_t>(layout.num_chirps) *
                                 static_cast<std::size_t>(layout.samples_per_chirp) *
                                 static_cast<std::size_t>(layout.num_channels);
    if (bytes.size() != expected) {
        raise(Errc::LengthMismatch, "capture holds " + std::to_string(bytes.size()) +
                                        " bytes, layout requires " + std::to_string(expected) +
                                        " (truncated or mismatched capture)");
    }

    IqFrame frame;
    frame.num_chirps = layout.num_chirps;
    frame.samples_per_chirp = layout.samples_per_chirp;
    frame.slow_time_rate_hz = slow_time_rate_hz;
    frame.layout = layout;
    frame.data.resize(static_cast<std::size_t>(layout.num_chirps) *
                      static_cast<std::size_t>(layout.samples_per_chirp));

    const std::size_t channels = static_cast<std::size_t>(layout.num_channels);
    const std::size_t channel = static_cast<std::size_t>(layout.selected_channel);
    std::size_t out = 0;
    for (std::size_t n = 0; n < static_cast<std::size_t>(layout.num_chirps); ++n) {
        for (std::size_t m = 0; m < static_cast<std::size_t>(layout.samples_per_chirp); ++m) {
            const std::size_t sample_index =
                (n * static_cast<std::size_t>(layout.samples_per_chirp) + m) * channels + channel;
            const std::uint8_t* p = bytes.data() + sample_index * kBytesPerComplexSample;
            frame.data[out++] = std::complex<double>(static_cast<double>(decode_le16(p)),
                                                     static_cast<double>(decode_le16(p + 2)));
        }
    }
    return frame;
}

std::vector<std::uint8_t> write_raw(const IqFrame& frame) {
    if (frame.num_chirps < 1 || frame.samples_per_chirp < 1) {
        raise(Errc::InvalidArgument, "frame dimensions must be positive");
    }
    const std::size_t count = static_cast<std::size_t>(frame.num_chirps) *
                              static_cast<std::size_t>(frame.samples_per_chirp);
    if (frame.data.size() != count) {
        raise(Errc::InvalidArgument, "frame data size does not match its dimensions");
    }

    std::vector<std::uint8_t> bytes;
    bytes.reserve(count * kBytesPerComplexSample);
    for (std::size_t i = 0; i < count; ++i) {
        encode_le16(round_to_int16(frame.data[i].real(), i, "I"), bytes);
        encode_le16(round_to_int16(frame.data[i].imag(), i, "Q"), bytes);
    }
    return bytes;
}

}  // namespace brux
