#include "gearcheck/error.hpp"
#include "gearcheck/features.hpp"
#include "gearcheck/synthgear.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace gearcheck;

namespace {

double rms(const Signal& s) {
    double acc = 0;
    for (double v : s.samples()) acc += v * v;
    return std::sqrt(acc / static_cast<double>(s.size()));
}

double at(const Spectrum& s, double hz) {
    const double df = s.freqs[1] - s.freqs[0];
    return s.magnitudes[static_cast<std::size_t>(std::lround(hz / df))];
}

double db(double ratio) { return 20 * std::log10(ratio); }

GearboxConfig config(HealthClass h, double motor = 25.0, double load = 0.0, std::uint64_t seed = 1) {
    GearboxConfig c;
    c.health = h;
    c.motor_freq = motor;
    c.load = load;
    c.seed = seed;
    c.duration = 2;
    return c;
}

} // namespace

TEST(Frequencies, Derived) {
    auto f = derive_frequencies(config(HealthClass::Healthy));
    EXPECT_DOUBLE_EQ(f.pinion_freq, 25.0);
    EXPECT_DOUBLE_EQ(f.gmf, 450.0);
    EXPECT_NEAR(f.gear_freq, 16.667, 1e-3);
    EXPECT_DOUBLE_EQ(derive_frequencies(config(HealthClass::Healthy, 15.0)).gmf, 270.0);
    auto unity = config(HealthClass::Healthy);
    unity.gear_teeth = unity.pinion_teeth;
    auto u = derive_frequencies(unity);
    EXPECT_DOUBLE_EQ(u.gear_freq, u.pinion_freq);
}

TEST(Frequencies, HarmonicTruncation) {
    EXPECT_EQ(mesh_harmonic_count(config(HealthClass::Healthy, 15.0)), 3u);
    EXPECT_EQ(mesh_harmonic_count(config(HealthClass::Healthy, 25.0)), 2u);
    EXPECT_EQ(mesh_harmonic_count(config(HealthClass::Healthy, 35.0)), 1u);
    EXPECT_THROW(config(HealthClass::Healthy, 60.0).validate(), DataError);
}

TEST(Config, Validation) {
    auto c = config(HealthClass::Healthy);
    c.noise_std = -1;
    EXPECT_THROW(c.validate(), DataError);
    c = config(HealthClass::Healthy);
    c.pinion_teeth = 0;
    EXPECT_THROW(c.validate(), DataError);
    c = config(HealthClass::Healthy);
    c.duration = 0;
    EXPECT_THROW(synthesize(c), DataError);
}

TEST(Synth, HealthyHasNoSidebands) {
    auto c = config(HealthClass::Healthy);
    c.noise_std = 0;
    auto s = compute_spectrum(synthesize(c));
    std::size_t peak = 1;
    for (std::size_t k = 1; k < s.size(); ++k)
        if (s.magnitudes[k] > s.magnitudes[peak]) peak = k;
    EXPECT_DOUBLE_EQ(s.freqs[peak], 450.0);
    const double carrier = at(s, 450);
    EXPECT_LT(db(at(s, 425) / carrier), -60.0);
    EXPECT_LT(db(at(s, 475) / carrier), -60.0);
}

TEST(Synth, MissingHasSidebandsAndOrdering) {
    auto s = compute_spectrum(synthesize(config(HealthClass::Missing)));
    const double carrier = at(s, 450);
    EXPECT_GT(db(at(s, 425) / carrier), -20.0);
    EXPECT_GT(db(at(s, 475) / carrier), -20.0);
    for (double load : kLoads) {
        const double m = rms(synthesize(config(HealthClass::Missing, 25, load)));
        const double c = rms(synthesize(config(HealthClass::Chipped, 25, load)));
        const double h = rms(synthesize(config(HealthClass::Healthy, 25, load)));
        EXPECT_GT(m, c);
        EXPECT_GT(c, h);
    }
}

TEST(Synth, SidebandsStandAboveNoise) {
    auto c = config(HealthClass::Missing);
    c.noise_std = 0.2;
    auto s = compute_spectrum(synthesize(c));
    // floor: median magnitude over 300-400 Hz, clear of tones
    std::vector<double> band;
    for (std::size_t k = 0; k < s.size(); ++k)
        if (s.freqs[k] > 300 && s.freqs[k] < 400) band.push_back(s.magnitudes[k]);
    std::nth_element(band.begin(), band.begin() + band.size() / 2, band.end());
    const double floor = band[band.size() / 2];
    for (double f : {425.0, 475.0}) {
        EXPECT_GT(db(at(s, f) / floor), 10.0);
        EXPECT_GT(at(s, f), at(s, f - 0.5));
        EXPECT_GT(at(s, f), at(s, f + 0.5));
    }
}

TEST(Synth, Deterministic) {
    auto c = config(HealthClass::Chipped);
    auto a = synthesize(c), b = synthesize(c);
    ASSERT_EQ(a.size(), 4096u);
    EXPECT_TRUE(std::equal(a.samples().begin(), a.samples().end(), b.samples().begin()));
    c.seed = 2;
    auto d = synthesize(c);
    EXPECT_FALSE(std::equal(a.samples().begin(), a.samples().end(), d.samples().begin()));
}

TEST(Synth, SeedIsolation) {
    auto c = config(HealthClass::Chipped, 35, 2);
    std::vector<double> values;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        c.seed = seed;
        values.push_back(rms(synthesize(c)));
    }
    double mean = 0;
    for (double v : values) mean += v;
    mean /= values.size();
    for (double v : values) EXPECT_NEAR(v, mean, 0.1 * mean);
}

TEST(Dataset, FullFactorial) {
    GearboxConfig base;
    base.duration = 2;
    auto set = make_dataset(base, 5);
    ASSERT_EQ(set.size(), kDatasetSize);
    std::map<HealthClass, int> count;
    for (const auto& s : set) {
        EXPECT_EQ(s.size(), 4096u);
        ASSERT_TRUE(s.meta().health && s.meta().motor_freq && s.meta().load);
        count[*s.meta().health]++;
    }
    for (auto h : {HealthClass::Healthy, HealthClass::Chipped, HealthClass::Missing}) EXPECT_EQ(count[h], 9);

    auto again = make_dataset(base, 5, true);
    for (std::size_t i = 0; i < set.size(); ++i) {
        EXPECT_TRUE(std::equal(set[i].samples().begin(), set[i].samples().end(), again[i].samples().begin()));
        EXPECT_EQ(set[i].meta().source, again[i].meta().source);
    }
}

TEST(Dataset, RmsOrderingAndPipeline) {
    GearboxConfig base;
    base.duration = 2;
    auto set = make_dataset(base, 3);
    std::map<std::pair<double, double>, std::map<HealthClass, double>> rms_of;
    for (const auto& s : set) {
        rms_of[{*s.meta().motor_freq, *s.meta().load}][*s.meta().health] = rms(s);
        for (auto kind : {OperatorKind::RawPassthrough, OperatorKind::Ceeo}) {
            EXPECT_NO_THROW(extract(s, kind, FeatureSet::Combined));
        }
    }
    for (auto& [key, by] : rms_of) {
        EXPECT_GT(by[HealthClass::Missing], by[HealthClass::Chipped]);
        EXPECT_GT(by[HealthClass::Chipped], by[HealthClass::Healthy]);
    }
}
