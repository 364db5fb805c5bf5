#pragma once

#include <complex>
#include <span>
#include <vector>

namespace gearcheck {

// Forward DFT, X(k) = sum_n x(n) exp(-2*pi*i*k*n/N), for any N >= 1.
// Powers of two use an iterative radix-2 transform; other lengths go through
// Bluestein's chirp-z reformulation on a padded power-of-two grid.
std::vector<std::complex<double>> dft(std::span<const double> input);
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> input);

} // namespace gearcheck
