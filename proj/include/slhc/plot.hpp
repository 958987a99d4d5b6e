#pragma once

// Minimal SVG line charts for sweep results: incorrect-structure ratio and
// mean l1 error against the grid value on a logarithmic axis.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "slhc/detail/numeric_text.hpp"
#include "slhc/error.hpp"
#include "slhc/simharness.hpp"

namespace slhc {

struct PlotSeries {
    std::string label;
    std::vector<SweepRow> rows;
};

namespace detail {

inline constexpr const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Panel {
    double left, top, width, height;
    double x_min, x_max, y_min, y_max;

    double px(double x) const { return left + (x - x_min) / (x_max - x_min) * width; }
    double py(double y) const { return top + height - (y - y_min) / (y_max - y_min) * height; }
};

inline std::string fixed(double v, int digits = 3) {
    std::ostringstream out;
    out.precision(digits);
    out << v;
    return out.str();
}

template <typename Value>
void draw_panel(std::ostringstream& svg, const Panel& p, const std::vector<PlotSeries>& series,
                Value value, const std::string& title, const std::string& x_label,
                double log_base) {
    svg << "<rect x='" << p.left << "' y='" << p.top << "' width='" << p.width << "' height='"
        << p.height << "' fill='none' stroke='black'/>\n";
    svg << "<text x='" << p.left + p.width / 2 << "' y='" << p.top - 10
        << "' text-anchor='middle' font-size='14'>" << title << "</text>\n";
    svg << "<text x='" << p.left + p.width / 2 << "' y='" << p.top + p.height + 40
        << "' text-anchor='middle' font-size='12'>" << x_label << "</text>\n";

    for (int k = 0; k <= 4; ++k) {
        const double y = p.y_min + (p.y_max - p.y_min) * k / 4.0;
        svg << "<line x1='" << p.left - 4 << "' y1='" << p.py(y) << "' x2='" << p.left
            << "' y2='" << p.py(y) << "' stroke='black'/>\n";
        svg << "<text x='" << p.left - 6 << "' y='" << p.py(y) + 4
            << "' text-anchor='end' font-size='10'>" << fixed(y) << "</text>\n";
    }
    const double first = std::ceil(p.x_min), last = std::floor(p.x_max);
    const double step = std::max(1.0, std::ceil((last - first) / 8.0));
    for (double x = first; x <= last; x += step) {
        svg << "<line x1='" << p.px(x) << "' y1='" << p.top + p.height << "' x2='" << p.px(x)
            << "' y2='" << p.top + p.height + 4 << "' stroke='black'/>\n";
        svg << "<text x='" << p.px(x) << "' y='" << p.top + p.height + 18
            << "' text-anchor='middle' font-size='10'>" << fixed(x) << "</text>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kSeriesColors[s % std::size(kSeriesColors)];
        svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (const auto& r : series[s].rows) {
            svg << p.px(std::log(r.grid_value) / std::log(log_base)) << ',' << p.py(value(r))
                << ' ';
        }
        svg << "'/>\n";
        for (const auto& r : series[s].rows) {
            svg << "<circle cx='" << p.px(std::log(r.grid_value) / std::log(log_base))
                << "' cy='" << p.py(value(r)) << "' r='2.5' fill='" << color << "'/>\n";
        }
    }
}

}  // namespace detail

/// Two-panel SVG: incorrect ratio and mean l1 error. Sigma sweeps use a
/// natural-log x axis, sample-count sweeps a log2 axis.
inline std::string render_svg(const std::vector<PlotSeries>& series) {
    if (series.empty() || std::any_of(series.begin(), series.end(),
                                      [](const PlotSeries& s) { return s.rows.empty(); })) {
        throw ArgumentError("nothing to plot");
    }
    const SweepKind kind = series.front().rows.front().kind;
    const double base = kind == SweepKind::sigma ? std::exp(1.0) : 2.0;
    const std::string x_label = kind == SweepKind::sigma ? "ln(sigma)" : "log2(N)";

    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double err_max = 0.0;
    for (const auto& s : series) {
        for (const auto& r : s.rows) {
            const double x = std::log(r.grid_value) / std::log(base);
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            err_max = std::max(err_max, r.mean_l1);
        }
    }
    if (x_min == x_max) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (err_max <= 0.0) {
        err_max = 1.0;
    }

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='900' height='420' "
           "font-family='sans-serif'>\n<rect width='900' height='420' fill='white'/>\n";
    const detail::Panel ratio{70, 40, 340, 300, x_min, x_max, 0.0, 1.0};
    const detail::Panel error{520, 40, 340, 300, x_min, x_max, 0.0, err_max * 1.05};
    detail::draw_panel(
        svg, ratio, series, [](const SweepRow& r) { return r.incorrect_ratio; },
        "Incorrect dendrogram structure ratio", x_label, base);
    detail::draw_panel(
        svg, error, series, [](const SweepRow& r) { return r.mean_l1; }, "Mean l1 error", x_label,
        base);
    for (std::size_t s = 0; s < series.size(); ++s) {
        svg << "<text x='" << 530 << "' y='" << 60 + 16 * s << "' font-size='11' fill='"
            << detail::kSeriesColors[s % std::size(detail::kSeriesColors)] << "'>"
            << series[s].label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

inline void write_svg(const std::vector<PlotSeries>& series, const std::string& path) {
    const auto text = render_svg(series);
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << text;
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

}  // namespace slhc
