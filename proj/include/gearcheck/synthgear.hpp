#pragma once

#include "gearcheck/signal.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace gearcheck {

// Every constant of the synthetic vibration model. Per-health arrays are
// indexed by HealthClass ordinal (Healthy, Chipped, Missing).
struct SignalModel {
    std::array<double, 3> mesh_amplitudes{1.0, 0.5, 0.25}; // GMF harmonics 1..3
    std::array<double, 3> severity{1.0, 1.5, 2.2};
    std::array<double, 3> modulation_depth{0.0, 0.3, 0.6};
    std::array<double, 3> impulse_peak{0.0, 1.0, 2.5};
    double load_gain = 0.1;          // severity becomes s + (1 + gain*load)
    double impulse_decay = 200.0;    // 1/s
    double impulse_ring_ratio = 0.4; // ringing frequency as a fraction of Nyquist
    double pinion_amplitude = 0.1;
    double gear_amplitude = 0.05;
    double harmonic_limit = 0.9; // mesh harmonics must sit below this fraction of Nyquist
};

struct GearboxConfig {
    int pinion_teeth = 18;
    int gear_teeth = 27;
    double motor_freq = 25.0; // Hz, pinion shaft
    double load = 0.0;        // lb
    HealthClass health = HealthClass::Healthy;
    double sample_rate = 2048.0;
    double duration = 30.0; // s
    double noise_std = 0.2;
    std::uint64_t seed = 0;
    SignalModel model;

    // Throws DataError on non-physical values or when not even the first
    // mesh harmonic fits below the harmonic limit.
    void validate() const;
};

struct DerivedFrequencies {
    double pinion_freq = 0;
    double gear_freq = 0;
    double gmf = 0;
};

inline constexpr std::array<double, 3> kMotorFrequencies{15.0, 25.0, 35.0};
inline constexpr std::array<double, 3> kLoads{0.0, 2.0, 4.0};
inline constexpr std::size_t kDatasetSize = 27;

DerivedFrequencies derive_frequencies(const GearboxConfig& config);

// Number of GMF harmonics (at most 3) below harmonic_limit * Nyquist.
std::size_t mesh_harmonic_count(const GearboxConfig& config);

// Amplitude-modulated mesh harmonics, shaft tones, one decaying impulse per
// pinion revolution and white Gaussian noise. Deterministic in (config, seed).
Signal synthesize(const GearboxConfig& config);

// Full factorial health x motor frequency x load around `base`, 27 signals,
// each with seed derive_seed(seed, index).
std::vector<Signal> make_dataset(const GearboxConfig& base, std::uint64_t seed,
                                 bool parallel = false);

} // namespace gearcheck
