// Standalone SVG line charts (no plotting backend needed).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace bayeslms::svg {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Shaded region between `lower` and `upper`.
struct Band {
    std::string name;
    std::vector<double> x;
    std::vector<double> lower;
    std::vector<double> upper;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<Band> bands;
    /// Longer series are decimated to about this many points.
    std::size_t max_points = 1500;
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::size_t stride_for(std::size_t n, std::size_t max_points) {
    return max_points == 0 || n <= max_points ? 1 : (n + max_points - 1) / max_points;
}

} // namespace detail

inline std::string render(const Chart& chart) {
    constexpr double width = 800.0;
    constexpr double height = 500.0;
    constexpr double left = 70.0;
    constexpr double right = 190.0;
    constexpr double top = 40.0;
    constexpr double bottom = 50.0;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    auto extend = [&](double x, double y) {
        if (std::isfinite(x) && std::isfinite(y)) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    };
    for (const auto& s : chart.series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            extend(s.x[i], s.y[i]);
        }
    }
    for (const auto& b : chart.bands) {
        for (std::size_t i = 0; i < b.x.size(); ++i) {
            extend(b.x[i], b.lower[i]);
            extend(b.x[i], b.upper[i]);
        }
    }
    if (!std::isfinite(x0)) {
        x0 = 0.0;
        x1 = 1.0;
        y0 = 0.0;
        y1 = 1.0;
    }
    if (x1 == x0) {
        x1 = x0 + 1.0;
    }
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
    out += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           detail::escape(chart.title) + "</text>\n";
    out += "<rect x=\"" + detail::num(left) + "\" y=\"" + detail::num(top) + "\" width=\"" + detail::num(pw) +
           "\" height=\"" + detail::num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4.0;
        const double fy = y0 + (y1 - y0) * i / 4.0;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4g", fx);
        out += "<text x=\"" + detail::num(px(fx)) + "\" y=\"" + detail::num(height - bottom + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + buf + "</text>\n";
        std::snprintf(buf, sizeof(buf), "%.4g", fy);
        out += "<text x=\"" + detail::num(left - 6) + "\" y=\"" + detail::num(py(fy) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + buf + "</text>\n";
    }
    out += "<text x=\"" + detail::num(left + pw / 2) + "\" y=\"" + detail::num(height - 10) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + detail::escape(chart.x_label) +
           "</text>\n";
    out += "<text x=\"16\" y=\"" + detail::num(top + ph / 2) + "\" transform=\"rotate(-90 16 " +
           detail::num(top + ph / 2) + ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           detail::escape(chart.y_label) + "</text>\n";

    double legend_y = top + 10;
    auto legend = [&](const std::string& name, const std::string& color, bool filled) {
        const double lx = width - right + 12;
        if (filled) {
            out += "<rect x=\"" + detail::num(lx) + "\" y=\"" + detail::num(legend_y - 6) +
                   "\" width=\"18\" height=\"10\" fill=\"" + color + "\" fill-opacity=\"0.25\"/>\n";
        } else {
            out += "<line x1=\"" + detail::num(lx) + "\" y1=\"" + detail::num(legend_y) + "\" x2=\"" +
                   detail::num(lx + 18) + "\" y2=\"" + detail::num(legend_y) + "\" stroke=\"" + color +
                   "\" stroke-width=\"2\"/>\n";
        }
        out += "<text x=\"" + detail::num(lx + 24) + "\" y=\"" + detail::num(legend_y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::escape(name) + "</text>\n";
        legend_y += 18;
    };

    for (std::size_t bi = 0; bi < chart.bands.size(); ++bi) {
        const auto& b = chart.bands[bi];
        if (b.x.empty()) {
            continue;
        }
        const std::string color = palette[(bi + 3) % 10];
        const std::size_t stride = detail::stride_for(b.x.size(), chart.max_points);
        std::string pts;
        for (std::size_t i = 0; i < b.x.size(); i += stride) {
            pts += detail::num(px(b.x[i])) + "," + detail::num(py(b.upper[i])) + " ";
        }
        for (std::size_t j = (b.x.size() - 1) / stride + 1; j-- > 0;) {
            const std::size_t i = j * stride;
            pts += detail::num(px(b.x[i])) + "," + detail::num(py(b.lower[i])) + " ";
        }
        out += "<polygon fill=\"" + color + "\" fill-opacity=\"0.25\" stroke=\"none\" points=\"" + pts + "\"/>\n";
        legend(b.name, color, true);
    }
    for (std::size_t si = 0; si < chart.series.size(); ++si) {
        const auto& s = chart.series[si];
        const std::string color = palette[si % 10];
        const std::size_t n = std::min(s.x.size(), s.y.size());
        const std::size_t stride = detail::stride_for(n, chart.max_points);
        std::string pts;
        for (std::size_t i = 0; i < n; i += stride) {
            if (std::isfinite(s.y[i])) {
                pts += detail::num(px(s.x[i])) + "," + detail::num(py(s.y[i])) + " ";
            }
        }
        out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts + "\">" +
               "<title>" + detail::escape(s.name) + "</title></polyline>\n";
        legend(s.name, color, false);
    }
    out += "</svg>\n";
    return out;
}

} // namespace bayeslms::svg
