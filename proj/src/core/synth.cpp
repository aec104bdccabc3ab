#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rng.hpp"

namespace floss {

namespace {

struct Ellipse {
    double cx, cy, ax, ay;

    bool contains(int x, int y) const {
        const double dx = (x - cx) / ax;
        const double dy = (y - cy) / ay;
        return dx * dx + dy * dy <= 1.0;
    }
};

void validate(const SynthConfig& c) {
    if (c.n_images < 1) {
        throw ConfigError("n_images must be >= 1, got " + std::to_string(c.n_images));
    }
    if (c.width < 1 || c.height < 1) {
        throw ConfigError("image size must be positive, got " + std::to_string(c.width) +
                          "x" + std::to_string(c.height));
    }
    if (c.blobs_min < 1 || c.blobs_max < c.blobs_min) {
        throw ConfigError("blob count range [" + std::to_string(c.blobs_min) + "," +
                          std::to_string(c.blobs_max) + "] is invalid");
    }
    if (c.noise_sigma < 0.0) {
        throw ConfigError("noise_sigma must be >= 0, got " + std::to_string(c.noise_sigma));
    }
    const bool ranges_ordered = c.fg_lo <= c.fg_hi && c.bg_lo <= c.bg_hi;
    const bool disjoint = c.bg_hi < c.fg_lo || c.fg_hi < c.bg_lo;
    if (!ranges_ordered || !disjoint) {
        throw ConfigError("foreground and background intensity ranges must be disjoint");
    }
    // Semi-axes are drawn from [width/8, width/3]; an ellipse of the minimum
    // axis must fit inside both dimensions with at least a pixel of play.
    const double a_min = c.width / 8.0;
    if (a_min < 1.0 || 2.0 * a_min > c.width - 1 || 2.0 * a_min > c.height - 1) {
        throw ConfigError("image " + std::to_string(c.width) + "x" +
                          std::to_string(c.height) +
                          " is too small for the minimum blob axis");
    }
}

} // namespace

std::vector<Sample> generate(const SynthConfig& config) {
    validate(config);
    const int w = config.width;
    const int h = config.height;
    const double a_min = w / 8.0;
    const double ax_max = std::min(w / 3.0, (w - 1) / 2.0);
    const double ay_max = std::min(w / 3.0, (h - 1) / 2.0);

    std::vector<Sample> samples;
    samples.reserve(static_cast<std::size_t>(config.n_images));
    for (int k = 0; k < config.n_images; ++k) {
        Rng rng(config.seed, static_cast<std::uint64_t>(k));

        const int n_blobs = config.blobs_min +
                            static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(
                                config.blobs_max - config.blobs_min + 1)));
        std::vector<Ellipse> blobs;
        std::vector<double> fg_values;
        blobs.reserve(static_cast<std::size_t>(n_blobs));
        for (int b = 0; b < n_blobs; ++b) {
            Ellipse e;
            e.ax = rng.uniform(a_min, ax_max);
            e.ay = rng.uniform(a_min, ay_max);
            e.cx = rng.uniform(e.ax, (w - 1) - e.ax);
            e.cy = rng.uniform(e.ay, (h - 1) - e.ay);
            blobs.push_back(e);
            fg_values.push_back(rng.uniform(config.fg_lo, config.fg_hi));
        }
        const double bg = rng.uniform(config.bg_lo, config.bg_hi);

        std::vector<double> image(static_cast<std::size_t>(w) * h, bg);
        std::vector<std::uint8_t> mask(image.size(), 0);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                // Later blobs paint over earlier ones.
                for (std::size_t b = 0; b < blobs.size(); ++b) {
                    if (blobs[b].contains(x, y)) {
                        image[i] = fg_values[b];
                        mask[i] = 1;
                    }
                }
            }
        }
        if (config.noise_sigma > 0.0) {
            for (auto& v : image) {
                v = std::clamp(v + rng.normal(0.0, config.noise_sigma), 0.0, 1.0);
            }
        }

        char id[16];
        std::snprintf(id, sizeof id, "img_%05d", k);
        SaliencyMap img(w, h, std::move(image));
        FeatureStack features = extract_features(img);
        samples.push_back(Sample{id, std::move(img), BinaryMap(w, h, std::move(mask)),
                                 std::move(features)});
    }
    return samples;
}

namespace {

// Box mean with edge-clamped (replicated) padding: the window always holds
// (2r+1)^2 samples, border pixels counted multiply.
void box_mean(const SaliencyMap& image, int radius, std::vector<double>& out,
              std::size_t channel) {
    const int w = image.width();
    const int h = image.height();
    const double inv = 1.0 / ((2.0 * radius + 1.0) * (2.0 * radius + 1.0));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                const int yy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int xx = std::clamp(x + dx, 0, w - 1);
                    sum += image[static_cast<std::size_t>(yy) * w + xx];
                }
            }
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            out[i * FeatureStack::kChannels + channel] = sum * inv;
        }
    }
}

} // namespace

FeatureStack extract_features(const SaliencyMap& image) {
    FeatureStack fs;
    fs.width = image.width();
    fs.height = image.height();
    fs.data.resize(image.size() * FeatureStack::kChannels);
    for (std::size_t i = 0; i < image.size(); ++i) {
        fs.data[i * FeatureStack::kChannels + 0] = image[i];
        fs.data[i * FeatureStack::kChannels + 3] = 1.0;
    }
    box_mean(image, 2, fs.data, 1);
    box_mean(image, 4, fs.data, 2);
    return fs;
}

std::pair<std::vector<Sample>, std::vector<Sample>> split(
    const std::vector<Sample>& samples, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ArgumentError("train_fraction must be in (0,1), got " +
                            std::to_string(train_fraction));
    }
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(samples.size())));
    std::pair<std::vector<Sample>, std::vector<Sample>> out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < n_train ? out.first : out.second).push_back(samples[order[i]]);
    }
    return out;
}

} // namespace floss
