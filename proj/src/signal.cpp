#include "gearcheck/signal.hpp"

#include "gearcheck/error.hpp"
#include "gearcheck/fft.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace gearcheck {
namespace {

std::string_view trim(std::string_view text) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!text.empty() && is_space(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && is_space(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    return text;
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        return std::nullopt;
    }
    return value;
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

} // namespace

std::string_view to_string(HealthClass health) {
    switch (health) {
    case HealthClass::Healthy:
        return "Healthy";
    case HealthClass::Chipped:
        return "Chipped";
    case HealthClass::Missing:
        return "Missing";
    }
    return "Unknown";
}

HealthClass parse_health(std::string_view text) {
    std::string lower;
    for (char c : trim(text)) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (lower == "healthy") {
        return HealthClass::Healthy;
    }
    if (lower == "chipped") {
        return HealthClass::Chipped;
    }
    if (lower == "missing") {
        return HealthClass::Missing;
    }
    throw DataError("unknown health class '" + std::string(text) + "'");
}

Signal::Signal(std::vector<double> samples, double sample_rate, SignalMeta meta)
    : samples_(std::move(samples)), sample_rate_(sample_rate), meta_(std::move(meta)) {
    if (samples_.empty()) {
        throw DataError("signal is empty");
    }
    if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
        throw DataError("sample rate must be positive");
    }
    const auto bad = std::find_if(samples_.begin(), samples_.end(),
                                  [](double v) { return !std::isfinite(v); });
    if (bad != samples_.end()) {
        throw DataError("non-finite sample at index " +
                        std::to_string(std::distance(samples_.begin(), bad)));
    }
}

Signal Signal::with_samples(std::vector<double> samples) const {
    return Signal(std::move(samples), sample_rate_, meta_);
}

Signal load_signal_csv(const std::filesystem::path& path, std::optional<double> sample_rate) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open signal file " + path.string());
    }

    std::vector<double> samples;
    SignalMeta meta;
    std::optional<double> header_rate;
    std::string line;
    std::size_t line_no = 0;

    const auto meta_number = [&](std::string_view key, std::string_view value) {
        auto parsed = parse_double(value);
        if (!parsed) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad value for " +
                            std::string(key));
        }
        return *parsed;
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty()) {
            continue;
        }
        if (text.front() == '#') {
            const std::string_view body = trim(text.substr(1));
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) {
                continue;
            }
            const std::string_view key = trim(body.substr(0, eq));
            const std::string_view value = trim(body.substr(eq + 1));
            if (key == "sample_rate") {
                header_rate = meta_number(key, value);
            } else if (key == "motor_freq") {
                meta.motor_freq = meta_number(key, value);
            } else if (key == "load") {
                meta.load = meta_number(key, value);
            } else if (key == "health") {
                meta.health = parse_health(value);
            } else if (key == "source") {
                meta.source = std::string(value);
            }
            continue;
        }
        const auto value = parse_double(text);
        if (!value) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": not a number: '" + std::string(text) + "'");
        }
        samples.push_back(*value);
    }

    if (samples.size() < kMinRecordLength) {
        throw DataError(path.string() + ": signal too short (" + std::to_string(samples.size()) +
                        " samples, need " + std::to_string(kMinRecordLength) + ")");
    }
    const auto rate = sample_rate ? sample_rate : header_rate;
    if (!rate) {
        throw DataError(path.string() + ": no sample rate given and none in header");
    }
    if (meta.source.empty()) {
        meta.source = path.filename().string();
    }
    return Signal(std::move(samples), *rate, std::move(meta));
}

void write_signal_csv(const std::filesystem::path& path, const Signal& signal) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write signal file " + path.string());
    }
    const auto& meta = signal.meta();
    out << "# sample_rate=" << format_double(signal.sample_rate()) << '\n';
    if (meta.motor_freq) {
        out << "# motor_freq=" << format_double(*meta.motor_freq) << '\n';
    }
    if (meta.load) {
        out << "# load=" << format_double(*meta.load) << '\n';
    }
    if (meta.health) {
        out << "# health=" << to_string(*meta.health) << '\n';
    }
    if (!meta.source.empty()) {
        out << "# source=" << meta.source << '\n';
    }
    for (double v : signal.samples()) {
        out << format_double(v) << '\n';
    }
    if (!out) {
        throw DataError("write failed for " + path.string());
    }
}

Spectrum compute_spectrum(const Signal& signal) {
    if (signal.size() < kMinSpectrumLength) {
        throw DataError("signal shorter than " + std::to_string(kMinSpectrumLength) +
                        " samples; cannot compute spectrum");
    }
    const std::size_t n = signal.size() - (signal.size() % 2);
    const auto samples = signal.samples().first(n);
    const auto transform = dft(samples);

    // Parseval: sum |X(k)|^2 == N * sum x(n)^2 before any one-sided folding.
    double time_energy = 0.0;
    for (double v : samples) {
        time_energy += v * v;
    }
    double freq_energy = 0.0;
    for (const auto& x : transform) {
        freq_energy += std::norm(x);
    }
    const double expected = static_cast<double>(n) * time_energy;
    if (std::abs(freq_energy - expected) > 1e-9 * std::max(expected, 1e-300)) {
        throw NumericalError("DFT failed Parseval check");
    }

    Spectrum spectrum;
    spectrum.sample_rate = signal.sample_rate();
    const std::size_t half = n / 2;
    spectrum.magnitudes.resize(half);
    spectrum.freqs.resize(half);
    const double nd = static_cast<double>(n);
    for (std::size_t k = 0; k < half; ++k) {
        const double scale = (k == 0 ? 1.0 : 2.0) / nd;
        spectrum.magnitudes[k] = scale * std::abs(transform[k]);
        spectrum.freqs[k] = signal.sample_rate() * static_cast<double>(k) / nd;
    }
    return spectrum;
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write spectrum file " + path.string());
    }
    out << "freq_hz,magnitude\n";
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        out << format_double(spectrum.freqs[k]) << ',' << format_double(spectrum.magnitudes[k])
            << '\n';
    }
}

std::vector<Signal> segment(const Signal& signal, std::size_t length, double overlap) {
    if (!(overlap >= 0.0 && overlap < 1.0)) {
        throw DataError("segment overlap must lie in [0, 1)");
    }
    if (length == 0) {
        throw DataError("segment length must be positive");
    }
    if (length > signal.size()) {
        throw DataError("segment length " + std::to_string(length) + " exceeds signal length " +
                        std::to_string(signal.size()));
    }
    const auto hop = static_cast<std::size_t>(
        std::max(1.0, std::round(static_cast<double>(length) * (1.0 - overlap))));

    std::vector<Signal> out;
    const auto samples = signal.samples();
    for (std::size_t start = 0; start + length <= samples.size(); start += hop) {
        const auto window = samples.subspan(start, length);
        out.push_back(signal.with_samples({window.begin(), window.end()}));
    }
    return out;
}

} // namespace gearcheck
