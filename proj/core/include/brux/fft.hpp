#pragma once

#include <complex>
#include <span>
#include <vector>

namespace brux {

// Unnormalized forward discrete Fourier transform,
//   X(k) = sum_m x[m] * exp(-j*2*pi*k*m/N).
// No window, no zero padding, no scaling. Power-of-two lengths run through an
// iterative radix-2 kernel; other lengths fall back to the direct O(N^2) sum,
// which is plenty for the short slow-time series this library analyzes.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x);

// One-sided power spectrum of a real series: |X(k)|^2 for k = 0..floor(N/2),
// bin k centered at k*sample_rate/N Hz. Same unnormalized transform as dft().
std::vector<double> one_sided_power_spectrum(std::span<const double> x);

}  // namespace brux
