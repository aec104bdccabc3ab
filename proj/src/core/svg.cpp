#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace floss {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof kPalette / sizeof kPalette[0];

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Bounds {
    double lo, hi;
};

Bounds padded_bounds(double lo, double hi) {
    if (lo > hi) std::swap(lo, hi);
    double pad = 0.05 * (hi - lo);
    if (pad == 0.0) pad = std::max(0.5, std::abs(lo) * 0.05);
    return {lo - pad, hi + pad};
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return out;
}

} // namespace

void plot_svg(const std::vector<Series>& series, const std::string& title,
              const std::string& x_label, const std::string& y_label,
              const std::filesystem::path& path) {
    if (series.empty()) {
        throw ArgumentError("plot_svg needs at least one series");
    }
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    bool first = true;
    for (const auto& s : series) {
        if (s.x.empty() || s.x.size() != s.y.size()) {
            throw ArgumentError("series '" + s.name +
                                "' must be nonempty with matching x/y lengths");
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    const Bounds bx = padded_bounds(xmin, xmax);
    const Bounds by = padded_bounds(ymin, ymax);

    constexpr double kW = 760, kH = 480;
    constexpr double kLeft = 70, kRight = 590, kTop = 46, kBottom = 420;
    const auto px = [&](double x) {
        return kLeft + (x - bx.lo) / (bx.hi - bx.lo) * (kRight - kLeft);
    };
    const auto py = [&](double y) {
        return kBottom - (y - by.lo) / (by.hi - by.lo) * (kBottom - kTop);
    };

    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
        << kH << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
        << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n"
        << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">"
        << xml_escape(title) << "</text>\n";

    // Axes and ticks.
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight
        << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
        << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = bx.lo + (bx.hi - bx.lo) * t / 4.0;
        const double fy = by.lo + (by.hi - by.lo) * t / 4.0;
        out << "<line x1=\"" << num(px(fx)) << "\" y1=\"" << kBottom << "\" x2=\""
            << num(px(fx)) << "\" y2=\"" << kBottom + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(px(fx)) << "\" y=\"" << kBottom + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(fx) << "</text>\n"
            << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(py(fy)) << "\" x2=\""
            << kLeft << "\" y2=\"" << num(py(fy)) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << kLeft - 9 << "\" y=\"" << num(py(fy) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(fy) << "</text>\n";
    }
    out << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 40
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << xml_escape(x_label) << "</text>\n"
        << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 "
        << (kTop + kBottom) / 2 << ")\">" << xml_escape(y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPaletteSize];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" "
               "points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            out << (i ? " " : "") << num(px(series[s].x[i])) << ","
                << num(py(series[s].y[i]));
        }
        out << "\"/>\n";
        const double ly = kTop + 8 + 18.0 * static_cast<double>(s);
        out << "<line x1=\"" << kRight + 10 << "\" y1=\"" << num(ly) << "\" x2=\""
            << kRight + 34 << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kRight + 40 << "\" y=\"" << num(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << xml_escape(series[s].name) << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

void heatmap_svg(const std::vector<SurfacePoint>& grid, int resolution,
                 const std::string& title, const std::filesystem::path& path) {
    const auto res = static_cast<std::size_t>(resolution);
    if (resolution < 2 || grid.size() != res * res) {
        throw ArgumentError("heatmap grid size " + std::to_string(grid.size()) +
                            " does not match resolution " + std::to_string(resolution));
    }
    double lo = grid[0].loss, hi = grid[0].loss;
    for (const auto& p : grid) {
        lo = std::min(lo, p.loss);
        hi = std::max(hi, p.loss);
    }
    const double span = hi > lo ? hi - lo : 1.0;

    constexpr double kPlot = 420, kLeft = 60, kTop = 40;
    const double cell = kPlot / static_cast<double>(resolution);
    std::ofstream out = open_out(path);
    const double w = kLeft + kPlot + 30, h = kTop + kPlot + 60;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
        << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
        << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
        << "<text x=\"" << kLeft + kPlot / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">"
        << xml_escape(title) << "</text>\n";
    for (std::size_t i = 0; i < res; ++i) {
        for (std::size_t j = 0; j < res; ++j) {
            const SurfacePoint& p = grid[i * res + j];
            const double v = (p.loss - lo) / span;
            // Two-stop lerp, dark blue (low) to yellow (high).
            const int r = static_cast<int>(std::lround(34 + v * (253 - 34)));
            const int g = static_cast<int>(std::lround(42 + v * (231 - 42)));
            const int b = static_cast<int>(std::lround(120 + v * (37 - 120)));
            char color[10];
            std::snprintf(color, sizeof color, "#%02x%02x%02x", r, g, b);
            out << "<rect x=\"" << num(kLeft + static_cast<double>(i) * cell) << "\" y=\""
                << num(kTop + (static_cast<double>(res - 1 - j)) * cell) << "\" width=\""
                << num(cell + 0.5) << "\" height=\"" << num(cell + 0.5) << "\" fill=\""
                << color << "\"/>\n";
        }
    }
    out << "<text x=\"" << kLeft + kPlot / 2 << "\" y=\"" << kTop + kPlot + 24
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">y0"
           "</text>\n"
        << "<text x=\"" << kLeft - 26 << "\" y=\"" << kTop + kPlot / 2
        << "\" font-family=\"sans-serif\" font-size=\"12\">y1</text>\n"
        << "<text x=\"" << kLeft + kPlot / 2 << "\" y=\"" << kTop + kPlot + 44
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">min "
        << tick_label(lo) << ", max " << tick_label(hi) << "</text>\n</svg>\n";
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

} // namespace floss
