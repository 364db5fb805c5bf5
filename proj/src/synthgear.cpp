#include "gearcheck/synthgear.hpp"

#include "gearcheck/error.hpp"
#include "gearcheck/parallel.hpp"
#include "gearcheck/seed.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

namespace gearcheck {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

} // namespace

void GearboxConfig::validate() const {
    if (pinion_teeth < 1 || gear_teeth < 1) {
        throw DataError("tooth counts must be at least 1");
    }
    if (!(motor_freq > 0.0)) {
        throw DataError("motor frequency must be positive");
    }
    if (!(sample_rate > 0.0)) {
        throw DataError("sample rate must be positive");
    }
    if (!(duration > 0.0)) {
        throw DataError("duration must be positive");
    }
    if (!(noise_std >= 0.0)) {
        throw DataError("noise std must be non-negative");
    }
    if (!(load >= 0.0)) {
        throw DataError("load must be non-negative");
    }
    if (static_cast<std::size_t>(std::floor(duration * sample_rate)) < kMinRecordLength) {
        throw DataError("duration too short for the sample rate");
    }
    if (mesh_harmonic_count(*this) == 0) {
        throw DataError("gear mesh frequency " + format_number(derive_frequencies(*this).gmf) +
                        " Hz is above the usable band at " + format_number(sample_rate) +
                        " samples/s");
    }
}

DerivedFrequencies derive_frequencies(const GearboxConfig& config) {
    DerivedFrequencies out;
    out.pinion_freq = config.motor_freq;
    out.gear_freq = config.motor_freq * static_cast<double>(config.pinion_teeth) /
                    static_cast<double>(config.gear_teeth);
    out.gmf = static_cast<double>(config.pinion_teeth) * config.motor_freq;
    return out;
}

std::size_t mesh_harmonic_count(const GearboxConfig& config) {
    const double gmf = derive_frequencies(config).gmf;
    const double limit = config.model.harmonic_limit * 0.5 * config.sample_rate;
    std::size_t count = 0;
    while (count < config.model.mesh_amplitudes.size() &&
           static_cast<double>(count + 1) * gmf < limit) {
        ++count;
    }
    return count;
}

Signal synthesize(const GearboxConfig& config) {
    config.validate();
    const auto freqs = derive_frequencies(config);
    const auto& model = config.model;
    const auto h = static_cast<std::size_t>(config.health);
    const std::size_t harmonics = mesh_harmonic_count(config);
    const std::size_t n = static_cast<std::size_t>(std::floor(config.duration * config.sample_rate));
    const double fs = config.sample_rate;

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> phase_dist(0.0, kTwoPi);
    std::array<double, 3> phases{};
    for (auto& p : phases) {
        p = phase_dist(rng);
    }
    const double revolution = 1.0 / freqs.pinion_freq;
    const double impulse_offset = std::uniform_real_distribution<double>(0.0, revolution)(rng);

    const double severity = model.severity[h] + (1.0 + model.load_gain * config.load);
    const double depth = model.modulation_depth[h];

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        const double envelope = 1.0 + depth * std::cos(kTwoPi * freqs.pinion_freq * t);
        double mesh = 0.0;
        for (std::size_t k = 0; k < harmonics; ++k) {
            mesh += model.mesh_amplitudes[k] *
                    std::cos(kTwoPi * static_cast<double>(k + 1) * freqs.gmf * t + phases[k]);
        }
        x[i] = severity * envelope * mesh +
               model.pinion_amplitude * std::cos(kTwoPi * freqs.pinion_freq * t) +
               model.gear_amplitude * std::cos(kTwoPi * freqs.gear_freq * t);
    }

    const double peak = model.impulse_peak[h];
    if (peak > 0.0) {
        const double ring = model.impulse_ring_ratio * 0.5 * fs;
        // Tails are cut once they fall below 1e-12 of the peak.
        const double tail = std::log(1e12) / model.impulse_decay;
        for (double start = impulse_offset; start < config.duration; start += revolution) {
            auto i = static_cast<std::size_t>(std::ceil(start * fs));
            for (; i < n; ++i) {
                const double tau = static_cast<double>(i) / fs - start;
                if (tau > tail) {
                    break;
                }
                x[i] += peak * std::exp(-model.impulse_decay * tau) * std::cos(kTwoPi * ring * tau);
            }
        }
    }

    if (config.noise_std > 0.0) {
        std::normal_distribution<double> noise(0.0, config.noise_std);
        for (auto& v : x) {
            v += noise(rng);
        }
    }

    SignalMeta meta;
    meta.motor_freq = config.motor_freq;
    meta.load = config.load;
    meta.health = config.health;
    meta.source = "synth:" + std::string(to_string(config.health)) + ":motor=" +
                  format_number(config.motor_freq) + ":load=" + format_number(config.load) +
                  ":harmonics=" + std::to_string(harmonics) + ":seed=" + std::to_string(config.seed);
    return Signal(std::move(x), fs, std::move(meta));
}

std::vector<Signal> make_dataset(const GearboxConfig& base, std::uint64_t seed, bool parallel) {
    base.validate();
    std::vector<GearboxConfig> configs;
    configs.reserve(kDatasetSize);
    for (auto health : {HealthClass::Healthy, HealthClass::Chipped, HealthClass::Missing}) {
        for (double motor : kMotorFrequencies) {
            for (double load : kLoads) {
                GearboxConfig c = base;
                c.health = health;
                c.motor_freq = motor;
                c.load = load;
                c.seed = derive_seed(seed, configs.size());
                configs.push_back(c);
            }
        }
    }
    std::vector<std::optional<Signal>> slots(configs.size());
    parallel_for(configs.size(), parallel, [&](std::size_t i) { slots[i] = synthesize(configs[i]); });
    std::vector<Signal> out;
    out.reserve(slots.size());
    for (auto& s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

} // namespace gearcheck
