#pragma once

#include "gearcheck/ceeo.hpp"
#include "gearcheck/signal.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gearcheck {

enum class FeatureSet { TimeOnly, Combined };

// CLI spellings: time, combined.
std::string_view to_string(FeatureSet set);
FeatureSet parse_feature_set(std::string_view text);

inline constexpr std::size_t kTimeFeatureCount = 12;
inline constexpr std::size_t kSpectralFeatureCount = 7;
inline constexpr std::size_t kFeatureCount = kTimeFeatureCount + kSpectralFeatureCount;

// Canonical column order: time-domain features, then spectral features.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "Peak",           "Mean",           "RMS",
    "CrestFactor",    "ImpulseFactor",  "ClearanceFactor",
    "Variance",       "StdDeviation",   "Skewness",
    "Kurtosis",       "SNR",            "SINAD",
    "SpectralCentroid", "SpectralSpread", "SpectralSkewness",
    "SpectralKurtosis", "SpectralEntropy", "SpectralCrest",
    "SpectralSlope",
};

inline constexpr std::size_t feature_count(FeatureSet set) {
    return set == FeatureSet::Combined ? kFeatureCount : kTimeFeatureCount;
}

struct TimeFeatures {
    double peak = 0;
    double mean = 0;
    double rms = 0;
    double crest_factor = 0;
    double impulse_factor = 0;
    double clearance_factor = 0;
    double variance = 0;
    double std_deviation = 0;
    double skewness = 0;
    double kurtosis = 0;
    double snr = 0;
    double sinad = 0;

    std::array<double, kTimeFeatureCount> values() const;
};

struct SpectralFeatures {
    double centroid = 0;
    double spread = 0;
    double skewness = 0;
    double kurtosis = 0;
    double entropy = 0;
    double crest = 0;
    double slope = 0;

    std::array<double, kSpectralFeatureCount> values() const;
};

struct MomentStatistics {
    double mean = 0;
    double variance = 0; // N-1 denominator
    double std_deviation = 0;
};

// Needs at least two samples.
MomentStatistics moments(std::span<const double> samples);

// Periodogram bookkeeping shared by the SNR and SINAD estimators. A periodic
// Hann window is applied and the one-sided power spectrum is partitioned into
// the DC region (bins 0-2), the fundamental (largest non-DC bin, +/-3 bins),
// harmonics 2..6 of the fundamental bin (+/-3 bins each, clipped to Nyquist)
// and everything else. Regions never double-count a bin.
struct ToneAnalysis {
    std::size_t fundamental_bin = 0;
    double fundamental_hz = 0;
    double total_power = 0;
    double dc_power = 0;
    double signal_power = 0;
    double harmonic_power = 0;
    double noise_power = 0;
};

inline constexpr std::size_t kMinToneAnalysisLength = 64;

ToneAnalysis analyze_tone(const Signal& signal);

// 10 log10(P_signal / P_noise). Throws DataError for a signal with no
// non-DC content or with zero residual noise.
double snr(const Signal& signal);
double snr(const ToneAnalysis& tone);

// Like snr, but harmonics stay in the denominator as distortion.
double sinad(const Signal& signal);
double sinad(const ToneAnalysis& tone);

// Throws DataError("degenerate signal") when the signal is all zeros or has
// zero variance.
TimeFeatures time_features(const Signal& signal);

// Individual spectral features. Each requires at least 8 bins and a nonzero
// magnitude sum. Skewness and kurtosis additionally need a nonzero spread.
double spectral_centroid(const Spectrum& spectrum);
double spectral_spread(const Spectrum& spectrum);
double spectral_skewness(const Spectrum& spectrum);
double spectral_kurtosis(const Spectrum& spectrum);
double spectral_entropy(const Spectrum& spectrum);
double spectral_crest(const Spectrum& spectrum);
double spectral_slope(const Spectrum& spectrum);

// All seven at once; throws DataError("degenerate spectrum") on zero spread.
SpectralFeatures spectral_features(const Spectrum& spectrum);

struct FeatureVector {
    FeatureSet set = FeatureSet::Combined;
    // Spectral slots are empty for TimeOnly vectors.
    std::array<std::optional<double>, kFeatureCount> values{};
    std::optional<HealthClass> label;
    std::string source;

    // Present values in canonical order (12 or 19 entries).
    std::vector<double> dense() const;
};

// Applies the operator, then computes time features on the transformed
// signal and, for Combined, spectral features on its spectrum.
FeatureVector extract(const Signal& signal, OperatorKind kind, FeatureSet set);

struct FeatureTable {
    FeatureSet set = FeatureSet::Combined;
    std::vector<FeatureVector> rows;
};

// Header: the 19 feature names then label,source. Absent features are
// written as empty fields.
void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable read_feature_csv(const std::filesystem::path& path);

} // namespace gearcheck
