#pragma once

#include <array>
#include <string>
#include <vector>

#include "brux/pipeline.hpp"
#include "brux/types.hpp"

namespace brux {

inline constexpr int kNumFeatures = 11;
inline constexpr double kBandLoHz = 5.0;   // mandibular micro-oscillation band
inline constexpr double kBandHiHz = 10.0;  // half-open upper edge

struct FeatureOptions {
    int histogram_bins = 16;          // amplitude histogram for the entropy feature
    double diff_threshold_rad = 0.04; // symmetric threshold for the crossing counts

    bool operator==(const FeatureOptions&) const = default;
};

// Eleven statistical and spectral descriptors of a phase-difference series,
// in the canonical column order given by feature_names(). Counts are stored
// as doubles so the vector is homogeneous.
struct FeatureVector {
    double kurtosis = 0.0;           // population m4 / m2^2; 0 when variance is zero
    double abs_mean = 0.0;           // mean absolute value
    double variance = 0.0;           // population variance
    double entropy = 0.0;            // Shannon entropy (bits) of the amplitude histogram
    double spectral_entropy = 0.0;   // Shannon entropy (bits) of the normalized PSD, DC excluded
    double spectral_variance = 0.0;  // PSD spread (Hz^2) about the power-weighted centroid
    double band_energy_5_10 = 0.0;   // fraction of non-DC power with bin center in [5, 10) Hz
    double n_maxima = 0.0;           // strict local maxima count
    double n_minima = 0.0;           // strict local minima count
    double n_above_thresh = 0.0;     // samples > +threshold
    double n_below_thresh = 0.0;     // samples < -threshold

    // Degenerate-input markers; the corresponding values above are 0 when set.
    bool kurtosis_degenerate = false;  // zero variance
    bool spectrum_degenerate = false;  // zero off-DC spectral power

    std::array<double, kNumFeatures> to_array() const {
        return {kurtosis,         abs_mean,          variance,        entropy,
                spectral_entropy, spectral_variance, band_energy_5_10, n_maxima,
                n_minima,         n_above_thresh,    n_below_thresh};
    }
};

const std::array<std::string, kNumFeatures>& feature_names();

// Computes the feature vector. Requires at least 8 samples (TooShort) and a
// slow-time rate above 20 Hz so the 5-10 Hz band is resolvable
// (NyquistViolation).
FeatureVector extract_features(const PhaseDiffSeries& series, const FeatureOptions& options = {});

// One labeled feature row per recording.
struct FeatureTable {
    std::vector<std::string> ids;
    std::vector<Label> labels;
    Matrix x;  // rows align with ids/labels; kNumFeatures columns

    bool operator==(const FeatureTable&) const = default;
};

// CSV with mandatory header  id,label,<canonical feature names>.
// Floats are written in shortest round-trip form; reading back is exact.
void write_feature_csv(const std::string& path, const FeatureTable& table);
FeatureTable read_feature_csv(const std::string& path);

}  // namespace brux
