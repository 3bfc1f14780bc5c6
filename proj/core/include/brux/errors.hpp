#pragma once

#include <stdexcept>
#include <string>

namespace brux {

// Every failure the library raises carries one of these codes so callers can
// react programmatically instead of parsing message text.
enum class Errc {
    InvalidArgument,     // malformed layout/config values (non-positive dims, bad rate, ...)
    LengthMismatch,      // raw capture byte count does not match the declared layout
    ChannelOutOfRange,   // selected channel not present in the capture
    SampleOverflow,      // sample does not fit signed 16-bit after rounding
    AmplitudeOverflow,   // synthesized signal exceeds ADC range at the configured gain
    WindowOutOfRange,    // range gate falls outside the sampled range axis
    ZeroMagnitudeBin,    // phase requested at a bin with an exactly-zero spectrum sample
    TooShort,            // series shorter than the operation requires
    NyquistViolation,    // slow-time rate too low for the analysis band
    EmptyNode,           // impurity requested for an empty sample set
    DegenerateDataset,   // training data does not contain two classes
    DimensionMismatch,   // inference vector width differs from the trained width
    EmptyEvaluation,     // metrics requested before any prediction was counted
    TooFewSamples,       // fewer samples than folds (or folds < 2)
    SchemaMismatch,      // file with wrong/unsupported schema tag, version, or structure
    BadConfig,           // unparseable or unknown configuration content
    IoError,             // file missing or unreadable/unwritable
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

inline const char* errc_name(Errc code) {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::ChannelOutOfRange: return "ChannelOutOfRange";
        case Errc::SampleOverflow: return "SampleOverflow";
        case Errc::AmplitudeOverflow: return "AmplitudeOverflow";
        case Errc::WindowOutOfRange: return "WindowOutOfRange";
        case Errc::ZeroMagnitudeBin: return "ZeroMagnitudeBin";
        case Errc::TooShort: return "TooShort";
        case Errc::NyquistViolation: return "NyquistViolation";
        case Errc::EmptyNode: return "EmptyNode";
        case Errc::DegenerateDataset: return "DegenerateDataset";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::EmptyEvaluation: return "EmptyEvaluation";
        case Errc::TooFewSamples: return "TooFewSamples";
        case Errc::SchemaMismatch: return "SchemaMismatch";
        case Errc::BadConfig: return "BadConfig";
        case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace brux
