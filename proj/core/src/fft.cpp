#include "brux/fft.hpp"

#include <cmath>
#include <cstddef>
#include <utility>

namespace brux {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 decimation-in-time transform, in place.
void fft_pow2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -2.0 * kPi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<std::complex<double>> dft_direct(std::span<const std::complex<double>> x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t m = 0; m < n; ++m) {
            const double angle = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(m) /
                                 static_cast<double>(n);
            acc += x[m] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[k] = acc;
    }
    return out;
}

}  // namespace

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x) {
    if (x.empty()) return {};
    if (is_power_of_two(x.size())) {
        std::vector<std::complex<double>> a(x.begin(), x.end());
        fft_pow2(a);
        return a;
    }
    return dft_direct(x);
}

std::vector<double> one_sided_power_spectrum(std::span<const double> x) {
    std::vector<std::complex<double>> cx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) cx[i] = std::complex<double>(x[i], 0.0);
    const auto spectrum = dft(cx);
    std::vector<double> power(x.empty() ? 0 : x.size() / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(spectrum[k]);
    return power;
}

}  // namespace brux
