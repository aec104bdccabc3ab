#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "losses.hpp"

namespace floss {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

// Standalone SVG line plot: one polyline per series, legend, linear axes with
// bounds = [min, max] of the data padded by 5%. Deterministic for identical
// input. Every series must be nonempty and have matching x/y lengths.
void plot_svg(const std::vector<Series>& series, const std::string& title,
              const std::string& x_label, const std::string& y_label,
              const std::filesystem::path& path);

// Contour-style rendering of a 2-pixel loss surface: resolution^2 cells
// colored by normalized loss, lexicographic (y0, y1) grid.
void heatmap_svg(const std::vector<SurfacePoint>& grid, int resolution,
                 const std::string& title, const std::filesystem::path& path);

} // namespace floss
