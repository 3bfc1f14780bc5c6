#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace brux {

// splitmix64 finalizer (public-domain mixing constants). Used to derive
// decorrelated child seeds from a base seed plus a stream index so that
// independent stochastic components never share a random stream.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(splitmix64(base) ^ splitmix64(stream + 0xA5A5A5A5A5A5A5A5ULL));
}

// Deterministic random source. The engine (mt19937_64) is fully specified by
// the standard, and all variate mappings below are written out explicitly
// instead of using std::*_distribution, whose algorithms are
// implementation-defined. This keeps every seeded run reproducible across
// compilers and standard libraries.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be positive; modulo bias is
    // negligible for the small n used here, and the mapping below through a
    // double keeps results identical everywhere.
    int uniform_int(int n) {
        int v = static_cast<int>(uniform() * static_cast<double>(n));
        return v < n ? v : n - 1;  // guard against uniform() rounding up
    }

    // One standard normal deviate (Box-Muller). Consumes two uniforms; the
    // second deviate of the pair is discarded so the stream position depends
    // only on the number of calls.
    double gaussian() { return gaussian_pair().first; }

    // Both Box-Muller outputs; cheaper when deviates are consumed in pairs
    // (e.g. the I and Q components of complex noise).
    std::pair<double, double> gaussian_pair() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;  // avoid log(0)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    // In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (int i = static_cast<int>(items.size()) - 1; i > 0; --i) {
            const int j = uniform_int(i + 1);
            std::swap(items[static_cast<std::size_t>(i)], items[static_cast<std::size_t>(j)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace brux
