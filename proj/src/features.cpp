#include "gearcheck/features.hpp"

#include "gearcheck/error.hpp"
#include "gearcheck/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gearcheck {
namespace {

constexpr std::size_t kDcBins = 3;       // bins 0..2
constexpr std::size_t kToneHalfWidth = 3; // +/- bins around a tone
constexpr std::size_t kLastHarmonic = 6;
// Residual noise below this fraction of total power is rounding error from
// the transform, i.e. the record is a noiseless tone.
constexpr double kNoiselessRatio = 1e-24;

[[noreturn]] void degenerate_signal(const char* why) {
    throw DataError(std::string("degenerate signal: ") + why);
}

[[noreturn]] void degenerate_spectrum(const char* why) {
    throw DataError(std::string("degenerate spectrum: ") + why);
}

void check_spectrum(const Spectrum& spectrum) {
    if (spectrum.magnitudes.size() != spectrum.freqs.size()) {
        throw DataError("spectrum magnitude/frequency length mismatch");
    }
    if (spectrum.size() < kMinSpectrumLength) {
        throw DataError("spectrum needs at least " + std::to_string(kMinSpectrumLength) + " bins");
    }
}

double magnitude_sum(const Spectrum& spectrum) {
    check_spectrum(spectrum);
    double sum = 0.0;
    for (double v : spectrum.magnitudes) {
        sum += v;
    }
    if (!(sum > 0.0)) {
        degenerate_spectrum("magnitudes sum to zero");
    }
    return sum;
}

// Weighted central moment sum_n (f - centre)^order F / sum F.
double weighted_moment(const Spectrum& spectrum, double centre, int order, double total) {
    double acc = 0.0;
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        const double d = spectrum.freqs[k] - centre;
        double term = spectrum.magnitudes[k];
        for (int p = 0; p < order; ++p) {
            term *= d;
        }
        acc += term;
    }
    return acc / total;
}

} // namespace

std::string_view to_string(FeatureSet set) {
    return set == FeatureSet::Combined ? "combined" : "time";
}

FeatureSet parse_feature_set(std::string_view text) {
    if (text == "time") {
        return FeatureSet::TimeOnly;
    }
    if (text == "combined") {
        return FeatureSet::Combined;
    }
    throw DataError("unknown feature set '" + std::string(text) + "' (expected time or combined)");
}

std::array<double, kTimeFeatureCount> TimeFeatures::values() const {
    return {peak,     mean,          rms,      crest_factor, impulse_factor, clearance_factor,
            variance, std_deviation, skewness, kurtosis,     snr,            sinad};
}

std::array<double, kSpectralFeatureCount> SpectralFeatures::values() const {
    return {centroid, spread, skewness, kurtosis, entropy, crest, slope};
}

MomentStatistics moments(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw DataError("moments need at least two samples");
    }
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double v : samples) {
        sum += v;
    }
    MomentStatistics out;
    out.mean = sum / n;
    double ss = 0.0;
    for (double v : samples) {
        const double d = v - out.mean;
        ss += d * d;
    }
    out.variance = ss / (n - 1.0);
    out.std_deviation = std::sqrt(out.variance);
    return out;
}

ToneAnalysis analyze_tone(const Signal& signal) {
    const std::size_t n = signal.size();
    if (n < kMinToneAnalysisLength) {
        throw DataError("SNR estimation needs at least " + std::to_string(kMinToneAnalysisLength) +
                        " samples");
    }
    const auto x = signal.samples();
    std::vector<double> windowed(n);
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / nd);
        windowed[i] = x[i] * w;
    }
    const auto transform = dft(windowed);

    const std::size_t bins = n / 2 + 1;
    const bool has_nyquist = (n % 2 == 0);
    std::vector<double> power(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        const bool single = (k == 0) || (has_nyquist && k == bins - 1);
        power[k] = (single ? 1.0 : 2.0) * std::norm(transform[k]);
    }
    const std::size_t last = bins - 1;

    enum Region : unsigned char { Unassigned, Dc, Fundamental, Harmonic };
    std::vector<Region> region(bins, Unassigned);
    for (std::size_t k = 0; k < kDcBins; ++k) {
        region[k] = Dc;
    }

    ToneAnalysis tone;
    tone.fundamental_bin = kDcBins;
    for (std::size_t k = kDcBins; k < bins; ++k) {
        if (power[k] > power[tone.fundamental_bin]) {
            tone.fundamental_bin = k;
        }
    }
    tone.fundamental_hz = signal.sample_rate() * static_cast<double>(tone.fundamental_bin) / nd;

    const auto claim = [&](std::size_t centre, Region tag) {
        const std::size_t lo = centre >= kToneHalfWidth ? centre - kToneHalfWidth : 0;
        const std::size_t hi = std::min(centre + kToneHalfWidth, last);
        for (std::size_t k = lo; k <= hi; ++k) {
            if (region[k] == Unassigned) {
                region[k] = tag;
            }
        }
    };
    claim(tone.fundamental_bin, Fundamental);
    for (std::size_t h = 2; h <= kLastHarmonic; ++h) {
        const std::size_t centre = h * tone.fundamental_bin;
        if (centre > last + kToneHalfWidth) {
            break;
        }
        claim(centre, Harmonic);
    }

    for (std::size_t k = 0; k < bins; ++k) {
        tone.total_power += power[k];
        switch (region[k]) {
        case Dc:
            tone.dc_power += power[k];
            break;
        case Fundamental:
            tone.signal_power += power[k];
            break;
        case Harmonic:
            tone.harmonic_power += power[k];
            break;
        case Unassigned:
            tone.noise_power += power[k];
            break;
        }
    }
    return tone;
}

double snr(const ToneAnalysis& tone) {
    if (!(tone.total_power - tone.dc_power > 0.0) || !(tone.signal_power > 0.0)) {
        throw DataError("no spectral content outside DC; SNR undefined");
    }
    if (tone.noise_power <= kNoiselessRatio * tone.total_power) {
        throw DataError("noiseless signal; SNR is unbounded");
    }
    return 10.0 * std::log10(tone.signal_power / tone.noise_power);
}

double sinad(const ToneAnalysis& tone) {
    if (!(tone.total_power - tone.dc_power > 0.0) || !(tone.signal_power > 0.0)) {
        throw DataError("no spectral content outside DC; SINAD undefined");
    }
    const double denominator = tone.noise_power + tone.harmonic_power;
    if (denominator <= kNoiselessRatio * tone.total_power) {
        throw DataError("noiseless signal; SINAD is unbounded");
    }
    return 10.0 * std::log10(tone.signal_power / denominator);
}

double snr(const Signal& signal) { return snr(analyze_tone(signal)); }

double sinad(const Signal& signal) { return sinad(analyze_tone(signal)); }

TimeFeatures time_features(const Signal& signal) {
    const auto y = signal.samples();
    if (y.size() < kMinSpectrumLength) {
        throw DataError("time features need at least " + std::to_string(kMinSpectrumLength) +
                        " samples");
    }
    const double n = static_cast<double>(y.size());

    TimeFeatures f;
    double sum_sq = 0.0;
    double sum_abs = 0.0;
    double sum_sqrt_abs = 0.0;
    for (double v : y) {
        const double a = std::abs(v);
        f.peak = std::max(f.peak, a);
        sum_sq += v * v;
        sum_abs += a;
        sum_sqrt_abs += std::sqrt(a);
    }
    if (f.peak == 0.0) {
        degenerate_signal("all samples are zero");
    }
    f.rms = std::sqrt(sum_sq / n);
    f.crest_factor = f.peak / f.rms;
    f.impulse_factor = f.peak / (sum_abs / n);
    const double mean_sqrt = sum_sqrt_abs / n;
    f.clearance_factor = f.peak / (mean_sqrt * mean_sqrt);

    const auto m = moments(y);
    f.mean = m.mean;
    f.variance = m.variance;
    f.std_deviation = m.std_deviation;
    if (!(f.variance > 0.0)) {
        degenerate_signal("zero variance");
    }
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : y) {
        const double d = v - f.mean;
        const double d2 = d * d;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double s3 = f.variance * f.std_deviation;
    f.skewness = m3 / ((n - 1.0) * s3);
    f.kurtosis = m4 / ((n - 1.0) * f.variance * f.variance);

    const auto tone = analyze_tone(signal);
    f.snr = snr(tone);
    f.sinad = sinad(tone);
    return f;
}

double spectral_centroid(const Spectrum& spectrum) {
    const double total = magnitude_sum(spectrum);
    return weighted_moment(spectrum, 0.0, 1, total);
}

double spectral_spread(const Spectrum& spectrum) {
    const double total = magnitude_sum(spectrum);
    const double centroid = weighted_moment(spectrum, 0.0, 1, total);
    return std::sqrt(weighted_moment(spectrum, centroid, 2, total));
}

double spectral_skewness(const Spectrum& spectrum) {
    return spectral_features(spectrum).skewness;
}

double spectral_kurtosis(const Spectrum& spectrum) {
    return spectral_features(spectrum).kurtosis;
}

double spectral_entropy(const Spectrum& spectrum) {
    const double total = magnitude_sum(spectrum);
    double h = 0.0;
    for (double v : spectrum.magnitudes) {
        const double p = v / total;
        if (p > 0.0) {
            h -= p * std::log(p);
        }
    }
    return h / std::log(static_cast<double>(spectrum.size()) - 1.0);
}

double spectral_crest(const Spectrum& spectrum) {
    const double total = magnitude_sum(spectrum);
    const double peak = *std::max_element(spectrum.magnitudes.begin(), spectrum.magnitudes.end());
    return peak / (total / (static_cast<double>(spectrum.size()) - 1.0));
}

double spectral_slope(const Spectrum& spectrum) {
    check_spectrum(spectrum);
    const double n = static_cast<double>(spectrum.size());
    double f_mean = 0.0;
    double m_mean = 0.0;
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        f_mean += spectrum.freqs[k];
        m_mean += spectrum.magnitudes[k];
    }
    f_mean /= n;
    m_mean /= n;
    double cov = 0.0;
    double var = 0.0;
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        const double df = spectrum.freqs[k] - f_mean;
        cov += df * (spectrum.magnitudes[k] - m_mean);
        var += df * df;
    }
    if (!(var > 0.0)) {
        degenerate_spectrum("frequency axis has no spread");
    }
    return cov / var;
}

SpectralFeatures spectral_features(const Spectrum& spectrum) {
    const double total = magnitude_sum(spectrum);
    SpectralFeatures out;
    out.centroid = weighted_moment(spectrum, 0.0, 1, total);
    const double variance = weighted_moment(spectrum, out.centroid, 2, total);
    out.spread = std::sqrt(variance);
    if (!(out.spread > 0.0)) {
        degenerate_spectrum("zero spectral spread; skewness and kurtosis undefined");
    }
    out.skewness = weighted_moment(spectrum, out.centroid, 3, total) / (variance * out.spread);
    out.kurtosis = weighted_moment(spectrum, out.centroid, 4, total) / (variance * variance);
    out.entropy = spectral_entropy(spectrum);
    out.crest = spectral_crest(spectrum);
    out.slope = spectral_slope(spectrum);
    return out;
}

std::vector<double> FeatureVector::dense() const {
    std::vector<double> out;
    out.reserve(kFeatureCount);
    for (const auto& v : values) {
        if (v) {
            out.push_back(*v);
        }
    }
    return out;
}

FeatureVector extract(const Signal& signal, OperatorKind kind, FeatureSet set) {
    const Signal processed = preprocess(signal, kind);

    FeatureVector out;
    out.set = set;
    out.label = signal.meta().health;
    out.source = signal.meta().source;

    const auto time = time_features(processed).values();
    std::copy(time.begin(), time.end(), out.values.begin());
    if (set == FeatureSet::Combined) {
        const auto spectral = spectral_features(compute_spectrum(processed)).values();
        std::copy(spectral.begin(), spectral.end(), out.values.begin() + kTimeFeatureCount);
    }
    return out;
}

} // namespace gearcheck
