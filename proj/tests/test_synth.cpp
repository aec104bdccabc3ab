#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "core/synth.hpp"

using namespace floss;

namespace {

SynthConfig small_config() {
    SynthConfig c;
    c.width = 16;
    c.height = 16;
    c.n_images = 12;
    c.seed = 42;
    return c;
}

} // namespace

TEST_CASE("generation is deterministic for a fixed config") {
    const SynthConfig c = small_config();
    const auto a = generate(c);
    const auto b = generate(c);
    REQUIRE(a.size() == 12);
    REQUIRE(b.size() == 12);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].id == b[k].id);
        CHECK(a[k].image.values() == b[k].image.values());
        CHECK(a[k].mask.values() == b[k].mask.values());
    }

    SynthConfig other = c;
    other.seed = 43;
    const auto d = generate(other);
    bool any_diff = false;
    for (std::size_t k = 0; k < a.size() && !any_diff; ++k) {
        any_diff = a[k].image.values() != d[k].image.values();
    }
    CHECK(any_diff);
}

TEST_CASE("ids are stable zero-padded indices") {
    const auto samples = generate(small_config());
    CHECK(samples[0].id == "img_00000");
    CHECK(samples[11].id == "img_00011");
}

TEST_CASE("every mask has at least one positive pixel") {
    SynthConfig c = small_config();
    c.n_images = 50;
    for (const auto& s : generate(c)) {
        CHECK(s.mask.positive_count() > 0);
        CHECK(s.mask.positive_count() < s.mask.size()); // and some background
    }
}

TEST_CASE("without noise the mask is a level set of the image") {
    SynthConfig c = small_config();
    c.noise_sigma = 0.0;
    c.n_images = 20;
    for (const auto& s : generate(c)) {
        for (std::size_t i = 0; i < s.image.size(); ++i) {
            const bool fg = s.image[i] > 0.5;
            CHECK(fg == (s.mask[i] == 1));
            // intensities stay inside the configured disjoint bands
            if (s.mask[i]) {
                CHECK(s.image[i] >= c.fg_lo);
                CHECK(s.image[i] <= c.fg_hi);
            } else {
                CHECK(s.image[i] >= c.bg_lo);
                CHECK(s.image[i] <= c.bg_hi);
            }
        }
    }
}

TEST_CASE("foreground fraction stays in a plausible band") {
    SynthConfig c;
    c.n_images = 60;
    c.seed = 3;
    double total_fg = 0.0, total = 0.0;
    for (const auto& s : generate(c)) {
        total_fg += static_cast<double>(s.mask.positive_count());
        total += static_cast<double>(s.mask.size());
    }
    const double frac = total_fg / total;
    CHECK(frac > 0.03);
    CHECK(frac < 0.45);
}

TEST_CASE("config validation rejects impossible settings") {
    SynthConfig c = small_config();
    c.width = 4; // minimum semi-axis would fall below one pixel
    CHECK_THROWS_AS(generate(c), ConfigError);

    c = small_config();
    c.n_images = 0;
    CHECK_THROWS_AS(generate(c), ConfigError);

    c = small_config();
    c.blobs_min = 3;
    c.blobs_max = 2;
    CHECK_THROWS_AS(generate(c), ConfigError);

    c = small_config();
    c.noise_sigma = -0.1;
    CHECK_THROWS_AS(generate(c), ConfigError);

    c = small_config();
    c.fg_lo = 0.35; // overlaps the background band, level-set property breaks
    CHECK_THROWS_AS(generate(c), ConfigError);
}

TEST_CASE("feature stack layout and box means") {
    std::vector<double> impulse(9 * 9, 0.0);
    impulse[4 * 9 + 4] = 1.0;
    const FeatureStack f = extract_features(SaliencyMap(9, 9, impulse));
    REQUIRE(f.pixels() == 81);
    const std::size_t center = 4 * 9 + 4;
    CHECK(f.at(center, 0) == 1.0);                              // raw
    CHECK(f.at(center, 1) == doctest::Approx(1.0 / 25).epsilon(1e-15)); // 5x5 box
    CHECK(f.at(center, 2) == doctest::Approx(1.0 / 81).epsilon(1e-15)); // 9x9 box
    CHECK(f.at(center, 3) == 1.0);                              // bias

    // replicated edge padding keeps a constant image constant in every channel
    const FeatureStack g = extract_features(SaliencyMap(6, 5, std::vector<double>(30, 0.7)));
    for (std::size_t i = 0; i < g.pixels(); ++i) {
        CHECK(g.at(i, 0) == doctest::Approx(0.7).epsilon(1e-15));
        CHECK(g.at(i, 1) == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(g.at(i, 2) == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(g.at(i, 3) == 1.0);
    }
}

TEST_CASE("split is disjoint, exhaustive and seeded") {
    const auto samples = generate(small_config());
    const auto [train, test] = split(samples, 2.0 / 3.0, 0);
    CHECK(train.size() == 8);
    CHECK(test.size() == 4);

    std::set<std::string> seen;
    for (const auto& s : train) seen.insert(s.id);
    for (const auto& s : test) seen.insert(s.id);
    CHECK(seen.size() == samples.size());

    const auto [train2, test2] = split(samples, 2.0 / 3.0, 0);
    for (std::size_t i = 0; i < train.size(); ++i) {
        CHECK(train[i].id == train2[i].id);
    }
    const auto [train3, test3] = split(samples, 2.0 / 3.0, 99);
    bool differs = false;
    for (std::size_t i = 0; i < train.size() && !differs; ++i) {
        differs = train[i].id != train3[i].id;
    }
    CHECK(differs);

    CHECK_THROWS_AS(split(samples, 0.0, 0), ArgumentError);
    CHECK_THROWS_AS(split(samples, 1.0, 0), ArgumentError);
}

TEST_CASE("the default config matches the benchmark recipe") {
    const SynthConfig c;
    CHECK(c.width == 32);
    CHECK(c.height == 32);
    CHECK(c.n_images == 300);
    const auto [train, test] = split(generate(small_config()), 2.0 / 3.0, 0);
    (void)train;
    (void)test;
}
