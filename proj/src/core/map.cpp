#include "map.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace floss {

namespace {

void check_shape(int width, int height, std::size_t n_values) {
    if (width < 1 || height < 1) {
        throw DimensionError("map dimensions must be >= 1, got " + std::to_string(width) +
                             "x" + std::to_string(height));
    }
    const auto expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (n_values != expected) {
        throw DimensionError("value count " + std::to_string(n_values) + " does not match " +
                             std::to_string(width) + "x" + std::to_string(height) + " = " +
                             std::to_string(expected));
    }
}

} // namespace

SaliencyMap::SaliencyMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    check_shape(width_, height_, values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        double v = values_[i];
        if (!(v >= -kRangeSlack && v <= 1.0 + kRangeSlack)) {
            throw DomainError("saliency value " + std::to_string(v) + " at index " +
                              std::to_string(i) + " outside [0,1]");
        }
        if (v < 0.0) values_[i] = 0.0;
        if (v > 1.0) values_[i] = 1.0;
    }
}

BinaryMap::BinaryMap(int width, int height, std::vector<std::uint8_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
    check_shape(width_, height_, values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] > 1) {
            throw DomainError("binary value " + std::to_string(int(values_[i])) + " at index " +
                              std::to_string(i) + " is neither 0 nor 1");
        }
    }
}

std::size_t BinaryMap::positive_count() const noexcept {
    std::size_t n = 0;
    for (auto v : values_) n += v;
    return n;
}

SaliencyMap BinaryMap::as_saliency() const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) v[i] = values_[i] ? 1.0 : 0.0;
    return SaliencyMap(width_, height_, std::move(v));
}

GradientMap::GradientMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    check_shape(width_, height_, values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DomainError("non-finite gradient entry at index " + std::to_string(i));
        }
    }
}

BinaryMap binarize(const SaliencyMap& pred, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError("threshold " + std::to_string(t) + " outside [0,1]");
    }
    std::vector<std::uint8_t> out(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) out[i] = pred[i] > t ? 1 : 0;
    return BinaryMap(pred.width(), pred.height(), std::move(out));
}

} // namespace floss
