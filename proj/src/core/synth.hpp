#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "map.hpp"

namespace floss {

// Blob-image generator configuration. Foreground and background intensity
// ranges must stay disjoint so the noiseless mask/level-set property holds.
struct SynthConfig {
    int width = 32;
    int height = 32;
    int n_images = 300;
    int blobs_min = 1;
    int blobs_max = 2;
    double fg_lo = 0.6;
    double fg_hi = 0.8;
    double bg_lo = 0.2;
    double bg_hi = 0.4;
    double noise_sigma = 0.1;
    std::uint64_t seed = 0;
};

// Per-pixel feature vectors, pixel-major: data[pixel * kChannels + channel].
// Channels: raw intensity, box mean radius 2, box mean radius 4, bias 1.
struct FeatureStack {
    static constexpr int kChannels = 4;

    int width = 0;
    int height = 0;
    std::vector<double> data;

    std::size_t pixels() const { return data.size() / kChannels; }
    double at(std::size_t pixel, int channel) const {
        return data[pixel * kChannels + static_cast<std::size_t>(channel)];
    }
};

struct Sample {
    std::string id;
    SaliencyMap image;
    BinaryMap mask;
    FeatureStack features;
};

// Deterministic for a fixed config: image k draws all of its randomness from
// the substream keyed by (seed, k). Each image is a constant background plus
// 1..2 ellipse blobs plus Gaussian noise, clipped to [0,1]; the mask is the
// union of the ellipse interiors and always has at least one positive pixel.
std::vector<Sample> generate(const SynthConfig& config);

FeatureStack extract_features(const SaliencyMap& image);

// Seed-shuffled disjoint exhaustive split; train side gets llround(fraction*n).
std::pair<std::vector<Sample>, std::vector<Sample>> split(
    const std::vector<Sample>& samples, double train_fraction, std::uint64_t seed);

} // namespace floss
