#pragma once

// Slow reference implementations used only by the tests. Written from the
// formulas directly, in long double, without sharing code with the library.

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

std::vector<std::complex<long double>> naive_dft(const std::vector<double>& x);

// One-sided amplitude spectrum with the library's bin layout.
struct NaiveSpectrum {
    std::vector<long double> mag;
    std::vector<long double> freq;
};
NaiveSpectrum spectrum(const std::vector<double>& x, double fs);

struct Tone {
    long double snr_db = 0;
    long double sinad_db = 0;
};
Tone tone(const std::vector<double>& x);

// 12 time features followed by 7 spectral features, canonical order.
std::array<long double, 12> time_features(const std::vector<double>& x);
std::array<long double, 7> spectral_features(const std::vector<long double>& mag,
                                             const std::vector<long double>& freq);
std::array<long double, 19> all_features(const std::vector<double>& x, double fs);

std::vector<double> ceeo(const std::vector<double>& x);
std::vector<double> teager(const std::vector<double>& x);

} // namespace oracle
