#include "gearcheck/fft.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace gearcheck {
namespace {

using cd = std::complex<double>;

// In-place iterative radix-2; data.size() must be a power of two.
void fft_pow2(std::vector<cd>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n < 2) {
        return;
    }
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }
    // Twiddles are evaluated directly rather than by recurrence to keep
    // rounding error at O(eps log N).
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cd> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        twiddle[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                                         static_cast<double>(n));
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cd u = data[start + k];
                const cd v = data[start + k + half] * twiddle[k * stride];
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
    }
}

std::vector<cd> bluestein(std::span<const cd> input) {
    const std::size_t n = input.size();
    const std::size_t m = std::bit_ceil(2 * n - 1);

    // chirp(k) = exp(-i*pi*k^2/N); k^2 is reduced mod 2N so the phase
    // argument stays small for long inputs.
    std::vector<cd> chirp(n);
    const std::uint64_t period = 2 * static_cast<std::uint64_t>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t kk = (static_cast<std::uint64_t>(k) * k) % period;
        chirp[k] = std::polar(1.0, -std::numbers::pi * static_cast<double>(kk) /
                                       static_cast<double>(n));
    }

    std::vector<cd> a(m, cd{});
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = input[k] * chirp[k];
    }
    std::vector<cd> b(m, cd{});
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
        b[k] = std::conj(chirp[k]);
        b[m - k] = std::conj(chirp[k]);
    }

    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t k = 0; k < m; ++k) {
        a[k] *= b[k];
    }
    fft_pow2(a, true);

    const double scale = 1.0 / static_cast<double>(m);
    std::vector<cd> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = a[k] * scale * chirp[k];
    }
    return out;
}

} // namespace

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> input) {
    const std::size_t n = input.size();
    if (n <= 1) {
        return {input.begin(), input.end()};
    }
    if (std::has_single_bit(n)) {
        std::vector<cd> data(input.begin(), input.end());
        fft_pow2(data, false);
        return data;
    }
    return bluestein(input);
}

std::vector<std::complex<double>> dft(std::span<const double> input) {
    std::vector<cd> data(input.begin(), input.end());
    return dft(std::span<const cd>(data));
}

} // namespace gearcheck
