#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace floss {

// splitmix64 finalizer; decorrelates (seed, stream) keys before seeding.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// mt19937_64 with explicit value mappings (instead of std distributions) so
// streams reproduce across standard libraries. Substreams keyed by
// (seed, stream) stay independent of each other and of the plain seed stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    Rng(std::uint64_t seed, std::uint64_t stream)
        : engine_(mix64(mix64(seed) ^ mix64(stream + 0x51b5c1a57aeb2741ULL))) {}

    // Uniform in [0,1): top 53 bits of one draw.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform in [0,n). Plain modulo; bias is < 2^-50 for the tiny n used here.
    std::uint64_t uniform_int(std::uint64_t n) { return engine_() % n; }

    bool bernoulli(double p) { return uniform() < p; }

    // Box-Muller, two fresh uniforms per call (no cached second value, so a
    // call sequence is a pure function of the draw count).
    double normal(double mean, double sigma) {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(6.283185307179586 * u2);
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace floss
