#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gearcheck {

enum class HealthClass { Healthy = 0, Chipped = 1, Missing = 2 };

inline constexpr std::size_t kHealthClassCount = 3;

std::string_view to_string(HealthClass health);
// Case-insensitive; throws DataError on anything other than the three names.
HealthClass parse_health(std::string_view text);

struct SignalMeta {
    std::optional<double> motor_freq; // Hz
    std::optional<double> load;       // lb
    std::optional<HealthClass> health;
    std::string source;
};

// Uniformly sampled real-valued record. Construction checks that the record
// is non-empty, finite and has a positive sample rate. The five-sample floor
// for raw recordings is applied at ingestion; operator outputs may be shorter.
class Signal {
public:
    Signal(std::vector<double> samples, double sample_rate, SignalMeta meta = {});

    std::span<const double> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    double sample_rate() const { return sample_rate_; }
    double duration() const { return static_cast<double>(samples_.size()) / sample_rate_; }
    const SignalMeta& meta() const { return meta_; }

    // Same rate and metadata, different samples.
    Signal with_samples(std::vector<double> samples) const;

private:
    std::vector<double> samples_;
    double sample_rate_;
    SignalMeta meta_;
};

inline constexpr std::size_t kMinRecordLength = 5;
inline constexpr std::size_t kMinSpectrumLength = 8;

// One-sided amplitude spectrum. magnitudes[n] pairs with freqs[n] = fs*n/N,
// n = 0..N/2-1, where N is the (even) transform length.
struct Spectrum {
    std::vector<double> magnitudes;
    std::vector<double> freqs;
    double sample_rate = 0.0;

    std::size_t size() const { return magnitudes.size(); }
};

// Reads one sample per line. Lines starting with '#' may carry `key=value`
// metadata (sample_rate, motor_freq, load, health, source). An explicit
// sample_rate overrides the header value; one of the two must be present.
Signal load_signal_csv(const std::filesystem::path& path,
                       std::optional<double> sample_rate = std::nullopt);

// Writes the header comments followed by samples at 17 significant digits,
// so that load_signal_csv reproduces them exactly.
void write_signal_csv(const std::filesystem::path& path, const Signal& signal);

// Odd-length signals lose their final sample. Throws DataError below 8 samples.
Spectrum compute_spectrum(const Signal& signal);

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);

// Windows of `length` samples with hop round(length*(1-overlap)); the
// trailing partial window is dropped.
std::vector<Signal> segment(const Signal& signal, std::size_t length, double overlap);

} // namespace gearcheck
