#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "error.hpp"

namespace floss {

// Values within this distance outside [0,1] are clamped instead of
// rejected; anything further out is a DomainError.
inline constexpr double kRangeSlack = 1e-12;

// Dense 2-D grid of per-pixel posteriors in [0,1], row-major.
// Immutable after construction.
class SaliencyMap {
public:
    SaliencyMap(int width, int height, std::vector<double> values);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    int width_;
    int height_;
    std::vector<double> values_;
};

// Dense 2-D grid of {0,1} labels, row-major. Immutable after construction.
class BinaryMap {
public:
    BinaryMap(int width, int height, std::vector<std::uint8_t> values);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::uint8_t operator[](std::size_t i) const noexcept { return values_[i]; }
    const std::vector<std::uint8_t>& values() const noexcept { return values_; }

    std::size_t positive_count() const noexcept;
    SaliencyMap as_saliency() const;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> values_;
};

// Per-pixel loss derivative, same shape as the prediction it differentiates.
// All entries finite (checked on construction).
class GradientMap {
public:
    GradientMap(int width, int height, std::vector<double> values);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    int width_;
    int height_;
    std::vector<double> values_;
};

// Strict comparison: pixel is foreground iff value > t, so t=1 yields the
// empty foreground and t=0 excludes exact zeros.
BinaryMap binarize(const SaliencyMap& pred, double t);

template <typename A, typename B>
bool shape_compatible(const A& a, const B& b) noexcept {
    return a.width() == b.width() && a.height() == b.height();
}

// Throws DimensionError unless shapes match. `what` names the offending pair.
template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
    if (!shape_compatible(a, b)) {
        throw DimensionError(std::string(what) + ": shape mismatch (" +
                             std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                             " vs " + std::to_string(b.width()) + "x" +
                             std::to_string(b.height()) + ")");
    }
}

} // namespace floss
