#pragma once

// Minimal SVG output: multi-series line plots and heatmaps. Enough to eyeball
// a run, not a plotting library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cqad/io/csv.hpp"

namespace cqad::io {

struct Series {
    std::string name;
    std::vector<double> x, y;
};

struct PlotLabels {
    std::string title, x, y;
};

namespace svg_detail {

constexpr double kW = 720, kH = 440, kL = 80, kR = 20, kT = 40, kB = 60;

inline std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f", v);
    return b;
}

inline std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

inline std::string header(const PlotLabels& l, double lo_x, double hi_x, double lo_y, double hi_y) {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kW) + "\" height=\"" + fmt(kH) +
                    "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt(kW / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + escape(l.title) + "</text>\n";
    s += "<text x=\"" + fmt(kW / 2) + "\" y=\"" + fmt(kH - 12) + "\" text-anchor=\"middle\">" + escape(l.x) + "</text>\n";
    s += "<text x=\"16\" y=\"" + fmt(kH / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + fmt(kH / 2) +
         ")\">" + escape(l.y) + "</text>\n";
    s += "<rect x=\"" + fmt(kL) + "\" y=\"" + fmt(kT) + "\" width=\"" + fmt(kW - kL - kR) + "\" height=\"" +
         fmt(kH - kT - kB) + "\" fill=\"none\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt(kL) + "\" y=\"" + fmt(kH - kB + 16) + "\">" + format_number(lo_x) + "</text>\n";
    s += "<text x=\"" + fmt(kW - kR) + "\" y=\"" + fmt(kH - kB + 16) + "\" text-anchor=\"end\">" + format_number(hi_x) +
         "</text>\n";
    s += "<text x=\"" + fmt(kL - 4) + "\" y=\"" + fmt(kH - kB) + "\" text-anchor=\"end\">" + format_number(lo_y) +
         "</text>\n";
    s += "<text x=\"" + fmt(kL - 4) + "\" y=\"" + fmt(kT + 10) + "\" text-anchor=\"end\">" + format_number(hi_y) +
         "</text>\n";
    return s;
}

// Dark blue to yellow, roughly perceptual.
inline std::string colour(double t) {
    static constexpr std::array<std::array<double, 3>, 5> stops{
        {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
    t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    const double u = t - i;
    char b[8];
    std::snprintf(b, sizeof b, "#%02x%02x%02x", static_cast<int>(std::lround(stops[i][0] + u * (stops[i + 1][0] - stops[i][0]))),
                  static_cast<int>(std::lround(stops[i][1] + u * (stops[i + 1][1] - stops[i][1]))),
                  static_cast<int>(std::lround(stops[i][2] + u * (stops[i + 1][2] - stops[i][2]))));
    return b;
}

} // namespace svg_detail

inline std::string line_plot_svg(const std::vector<Series>& series, const PlotLabels& labels) {
    using namespace svg_detail;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, s.y[i]);
                y1 = std::max(y1, s.y[i]);
            }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    std::string out = header(labels, x0, x1, y0, y1);
    const double pw = kW - kL - kR, ph = kH - kT - kB;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        std::string d;
        bool pen = false;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                pen = false;   // gaps at NaN
                continue;
            }
            d += (pen ? " L" : " M") + fmt(kL + pw * (s.x[i] - x0) / (x1 - x0)) + " " +
                 fmt(kT + ph * (1.0 - (s.y[i] - y0) / (y1 - y0)));
            pen = true;
        }
        const char* c = palette[k % 6];
        out += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + c + "\" stroke-width=\"1.2\"/>\n";
        out += "<text x=\"" + fmt(kW - kR - 6) + "\" y=\"" + fmt(kT + 16 + 14 * k) + "\" text-anchor=\"end\" fill=\"" + c +
               "\">" + escape(s.name) + "</text>\n";
    }
    return out + "</svg>\n";
}

/// Heatmap of z (row-major, rows along y). Large grids are block-averaged to
/// at most max_cells per axis and equal neighbouring colours are merged.
inline std::string heatmap_svg(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& z,
                               const PlotLabels& labels, std::size_t max_cells = 400) {
    using namespace svg_detail;
    if (x.empty() || y.empty() || z.size() != x.size() * y.size()) throw ShapeError("heatmap: z must be |y| x |x|");
    const std::size_t bx = (x.size() + max_cells - 1) / max_cells, by = (y.size() + max_cells - 1) / max_cells;
    const std::size_t nx = (x.size() + bx - 1) / bx, ny = (y.size() + by - 1) / by;
    std::vector<double> cell(nx * ny, 0.0);
    for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = 0; j < nx; ++j) {
            double sum = 0;
            int n = 0;
            for (std::size_t a = i * by; a < std::min(y.size(), (i + 1) * by); ++a)
                for (std::size_t b = j * bx; b < std::min(x.size(), (j + 1) * bx); ++b) {
                    sum += z[a * x.size() + b];
                    ++n;
                }
            cell[i * nx + j] = sum / n;
        }
    const auto [mn, mx] = std::minmax_element(cell.begin(), cell.end());
    const double lo = *mn, span = *mx > *mn ? *mx - *mn : 1.0;
    std::string out = header(labels, x.front(), x.back(), y.front(), y.back());
    const double pw = kW - kL - kR, ph = kH - kT - kB, cw = pw / nx, ch = ph / ny;
    for (std::size_t i = 0; i < ny; ++i) {
        std::size_t j = 0;
        while (j < nx) {
            const std::string c = colour((cell[i * nx + j] - lo) / span);
            std::size_t k = j + 1;
            while (k < nx && colour((cell[i * nx + k] - lo) / span) == c) ++k;
            out += "<rect x=\"" + fmt(kL + j * cw) + "\" y=\"" + fmt(kT + ph - (i + 1) * ch) + "\" width=\"" +
                   fmt((k - j) * cw + 0.3) + "\" height=\"" + fmt(ch + 0.3) + "\" fill=\"" + c + "\"/>\n";
            j = k;
        }
    }
    return out + "</svg>\n";
}

inline void write_svg(const std::filesystem::path& path, const std::string& svg) { write_atomic(path, svg); }

} // namespace cqad::io
