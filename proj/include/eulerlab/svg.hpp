// SPDX-License-Identifier: Apache-2.0
//
// Minimal log-log line plot written as standalone SVG.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "eulerlab/core.hpp"

namespace eulerlab {

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
    std::string color = "#1f77b4";
    bool dashed = false;
    bool markers = false;
};

struct LogLogPlot {
    std::string title;
    std::string x_label = "N";
    std::string y_label;
    std::vector<PlotSeries> series;
    int width = 720;
    int height = 480;
};

namespace detail {

inline std::string svg_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace detail

/// Non-positive and non-finite points are skipped; axes span whole decades.
inline void render_loglog_svg(std::ostream& os, const LogLogPlot& plot) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.x[i]) ||
                !std::isfinite(s.y[i]))
                continue;
            xmin = std::min(xmin, std::log10(s.x[i]));
            xmax = std::max(xmax, std::log10(s.x[i]));
            ymin = std::min(ymin, std::log10(s.y[i]));
            ymax = std::max(ymax, std::log10(s.y[i]));
        }
    if (!(xmin <= xmax)) throw DomainError("render_loglog_svg: no positive data");
    xmin = std::floor(xmin);
    xmax = std::max(std::ceil(xmax), xmin + 1.0);
    ymin = std::floor(ymin);
    ymax = std::max(std::ceil(ymax), ymin + 1.0);

    const double left = 80, right = 180, top = 40, bottom = 60;
    const double pw = plot.width - left - right, ph = plot.height - top - bottom;
    auto px = [&](double lx) { return left + (lx - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double ly) { return top + (ymax - ly) / (ymax - ymin) * ph; };

    using detail::svg_num;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\""
       << plot.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
       << "font-size=\"14\">" << detail::svg_escape(plot.title) << "</text>\n";
    os << "<rect x=\"" << svg_num(left) << "\" y=\"" << svg_num(top) << "\" width=\""
       << svg_num(pw) << "\" height=\"" << svg_num(ph)
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    const int xstep = std::max(1, static_cast<int>((xmax - xmin) / 10.0));
    for (int e = static_cast<int>(xmin); e <= static_cast<int>(xmax); e += xstep) {
        const double x = px(e);
        os << "<line x1=\"" << svg_num(x) << "\" y1=\"" << svg_num(top) << "\" x2=\""
           << svg_num(x) << "\" y2=\"" << svg_num(top + ph)
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << svg_num(x) << "\" y=\"" << svg_num(top + ph + 18)
           << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
    }
    const int ystep = std::max(1, static_cast<int>((ymax - ymin) / 10.0));
    for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); e += ystep) {
        const double y = py(e);
        os << "<line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(y) << "\" x2=\""
           << svg_num(left + pw) << "\" y2=\"" << svg_num(y) << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << svg_num(left - 6) << "\" y=\"" << svg_num(y + 4)
           << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
    os << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"" << svg_num(plot.height - 16.0)
       << "\" text-anchor=\"middle\">" << detail::svg_escape(plot.x_label) << "</text>\n";
    os << "<text transform=\"translate(20," << svg_num(top + ph / 2)
       << ") rotate(-90)\" text-anchor=\"middle\">" << detail::svg_escape(plot.y_label)
       << "</text>\n";

    double legend_y = top + 10;
    for (const auto& s : plot.series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
        if (s.dashed) os << " stroke-dasharray=\"6,4\"";
        os << " points=\"";
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            if (s.x[i] > 0.0 && s.y[i] > 0.0 && std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
                pts.emplace_back(px(std::log10(s.x[i])), py(std::log10(s.y[i])));
        for (const auto& [x, y] : pts) os << svg_num(x) << ',' << svg_num(y) << ' ';
        os << "\"/>\n";
        if (s.markers)
            for (const auto& [x, y] : pts)
                os << "<circle cx=\"" << svg_num(x) << "\" cy=\"" << svg_num(y)
                   << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
        const double lx = left + pw + 12;
        os << "<line x1=\"" << svg_num(lx) << "\" y1=\"" << svg_num(legend_y) << "\" x2=\""
           << svg_num(lx + 24) << "\" y2=\"" << svg_num(legend_y) << "\" stroke=\"" << s.color
           << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
           << "/>\n";
        os << "<text x=\"" << svg_num(lx + 30) << "\" y=\"" << svg_num(legend_y + 4) << "\">"
           << detail::svg_escape(s.label) << "</text>\n";
        legend_y += 20;
    }
    os << "</svg>\n";
}

}  // namespace eulerlab
