#include "brux/features.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "brux/errors.hpp"
#include "brux/fft.hpp"

namespace brux {

namespace {

constexpr int kMinSeriesLength = 8;
constexpr double kMinSlowTimeRateHz = 20.0;

double shannon_entropy_bits(const std::vector<double>& probabilities) {
    double h = 0.0;
    for (double p : probabilities) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

const std::array<std::string, kNumFeatures>& feature_names() {
    static const std::array<std::string, kNumFeatures> names = {
        "kurtosis",         "abs_mean",          "variance",         "entropy",
        "spectral_entropy", "spectral_variance", "band_energy_5_10", "n_maxima",
        "n_minima",         "n_above_thresh",    "n_below_thresh"};
    return names;
}

FeatureVector extract_features(const PhaseDiffSeries& series, const FeatureOptions& options) {
    const std::vector<double>& x = series.diff_rad;
    const std::size_t n = x.size();
    if (n < kMinSeriesLength) {
        raise(Errc::TooShort, "series of length " + std::to_string(n) + " is shorter than " +
                                  std::to_string(kMinSeriesLength));
    }
    if (!(series.slow_time_rate_hz > kMinSlowTimeRateHz)) {
        raise(Errc::NyquistViolation,
              "slow-time rate " + format_double(series.slow_time_rate_hz) +
                  " Hz cannot resolve the " + format_double(kBandLoHz) + "-" +
                  format_double(kBandHiHz) + " Hz band");
    }
    if (options.histogram_bins < 2) {
        raise(Errc::InvalidArgument, "histogram needs at least 2 bins");
    }
    if (!(options.diff_threshold_rad >= 0.0)) {
        raise(Errc::InvalidArgument, "crossing threshold must be non-negative");
    }

    FeatureVector f;
    const double inv_n = 1.0 / static_cast<double>(n);

    double lo = x[0], hi = x[0];
    for (double v : x) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // Constancy is decided on the values themselves, not on a computed
    // variance: summation round-off on n identical values must not leak a
    // phantom variance into the degenerate markers.
    const bool constant = !(hi > lo);

    // Moment statistics (population normalization).
    double mean;
    if (constant) {
        mean = x[0];
        f.abs_mean = std::abs(x[0]);
        f.variance = 0.0;
        f.kurtosis = 0.0;
        f.kurtosis_degenerate = true;
    } else {
        mean = 0.0;
        for (double v : x) mean += v;
        mean *= inv_n;

        double abs_sum = 0.0, m2 = 0.0, m4 = 0.0;
        for (double v : x) {
            abs_sum += std::abs(v);
            const double d = v - mean;
            const double d2 = d * d;
            m2 += d2;
            m4 += d2 * d2;
        }
        m2 *= inv_n;
        m4 *= inv_n;
        f.abs_mean = abs_sum * inv_n;
        f.variance = m2;
        if (m2 > 0.0) {
            f.kurtosis = m4 / (m2 * m2);
        } else {
            f.kurtosis = 0.0;
            f.kurtosis_degenerate = true;
        }
    }

    // Amplitude-histogram entropy over [min, max]; a constant series carries
    // no amplitude information and scores 0 by convention.
    if (hi > lo) {
        std::vector<double> histogram(static_cast<std::size_t>(options.histogram_bins), 0.0);
        const double scale = static_cast<double>(options.histogram_bins) / (hi - lo);
        for (double v : x) {
            int bin = static_cast<int>((v - lo) * scale);
            if (bin >= options.histogram_bins) bin = options.histogram_bins - 1;  // v == max
            histogram[static_cast<std::size_t>(bin)] += inv_n;
        }
        f.entropy = shannon_entropy_bits(histogram);
    }

    // Spectral descriptors from a single full-length periodogram of the
    // mean-removed series, no window. One-sided bins, DC excluded; bin k is
    // centered at k * rate / n Hz. A constant series has an identically-zero
    // residual, so it takes the degenerate branch without transforming.
    std::vector<double> centered(n, 0.0);
    if (!constant) {
        for (std::size_t i = 0; i < n; ++i) centered[i] = x[i] - mean;
    }
    const std::vector<double> psd =
        constant ? std::vector<double>(n / 2 + 1, 0.0) : one_sided_power_spectrum(centered);

    double total = 0.0;
    for (std::size_t k = 1; k < psd.size(); ++k) total += psd[k];
    if (total > 0.0) {
        const double bin_hz = series.slow_time_rate_hz / static_cast<double>(n);
        std::vector<double> p(psd.size() - 1);
        double centroid = 0.0;
        double band = 0.0;
        for (std::size_t k = 1; k < psd.size(); ++k) {
            const double pk = psd[k] / total;
            p[k - 1] = pk;
            const double freq = static_cast<double>(k) * bin_hz;
            centroid += pk * freq;
            if (freq >= kBandLoHz && freq < kBandHiHz) band += pk;
        }
        double spread = 0.0;
        for (std::size_t k = 1; k < psd.size(); ++k) {
            const double freq = static_cast<double>(k) * bin_hz;
            spread += p[k - 1] * (freq - centroid) * (freq - centroid);
        }
        f.spectral_entropy = shannon_entropy_bits(p);
        f.spectral_variance = spread;
        f.band_energy_5_10 = band;
    } else {
        f.spectrum_degenerate = true;
    }

    // Shape and threshold-crossing counts. Extrema are strict, so plateaus
    // and endpoints never count.
    double maxima = 0.0, minima = 0.0, above = 0.0, below = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = x[i];
        if (i > 0 && i + 1 < n) {
            if (v > x[i - 1] && v > x[i + 1]) maxima += 1.0;
            if (v < x[i - 1] && v < x[i + 1]) minima += 1.0;
        }
        if (v > options.diff_threshold_rad) above += 1.0;
        if (v < -options.diff_threshold_rad) below += 1.0;
    }
    f.n_maxima = maxima;
    f.n_minima = minima;
    f.n_above_thresh = above;
    f.n_below_thresh = below;
    return f;
}

void write_feature_csv(const std::string& path, const FeatureTable& table) {
    const std::size_t rows = table.ids.size();
    if (table.labels.size() != rows || table.x.rows != static_cast<int>(rows) ||
        table.x.cols != kNumFeatures) {
        raise(Errc::InvalidArgument, "feature table rows/labels/matrix are inconsistent");
    }

    std::ofstream out(path);
    if (!out) raise(Errc::IoError, "cannot open '" + path + "' for writing");

    out << "id,label";
    for (const auto& name : feature_names()) out << ',' << name;
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        out << table.ids[r] << ',' << to_string(table.labels[r]);
        for (int c = 0; c < kNumFeatures; ++c) {
            out << ',' << format_double(table.x.at(static_cast<int>(r), c));
        }
        out << '\n';
    }
    if (!out) raise(Errc::IoError, "failed writing '" + path + "'");
}

FeatureTable read_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::IoError, "cannot open '" + path + "'");

    std::string expected_header = "id,label";
    for (const auto& name : feature_names()) expected_header += "," + name;

    std::string line;
    if (!std::getline(in, line)) raise(Errc::SchemaMismatch, "'" + path + "' is empty");
    if (line == expected_header + "\r") line.pop_back();
    if (line != expected_header) {
        raise(Errc::SchemaMismatch, "'" + path + "' header does not match the feature schema");
    }

    FeatureTable table;
    std::vector<double> values;
    std::set<std::string> seen_ids;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 2 + kNumFeatures) {
            raise(Errc::SchemaMismatch, path + ":" + std::to_string(line_no) + ": expected " +
                                            std::to_string(2 + kNumFeatures) + " fields, found " +
                                            std::to_string(fields.size()));
        }
        if (fields[0].empty() || !seen_ids.insert(fields[0]).second) {
            raise(Errc::SchemaMismatch,
                  path + ":" + std::to_string(line_no) + ": empty or duplicate id '" + fields[0] + "'");
        }
        table.ids.push_back(fields[0]);
        try {
            table.labels.push_back(parse_label(fields[1]));
        } catch (const Error&) {
            raise(Errc::SchemaMismatch,
                  path + ":" + std::to_string(line_no) + ": unknown label '" + fields[1] + "'");
        }
        for (int c = 0; c < kNumFeatures; ++c) {
            const std::string& text = fields[static_cast<std::size_t>(2 + c)];
            char* end = nullptr;
            const double value = std::strtod(text.c_str(), &end);
            if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value)) {
                raise(Errc::SchemaMismatch, path + ":" + std::to_string(line_no) +
                                                ": field '" + text + "' is not a finite number");
            }
            values.push_back(value);
        }
    }

    table.x.rows = static_cast<int>(table.ids.size());
    table.x.cols = kNumFeatures;
    table.x.values = std::move(values);
    return table;
}

}  // namespace brux
