#pragma once

// Minimal self-contained SVG line plots: inline axes, 1-2-5 ticks, one
// polyline per series, text legend. No external plotting dependency.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "csv.hpp"

namespace nablafc::svg {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

namespace detail {

inline double nice_step(double span, int target_ticks) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= mult * mag * (1.0 + 1e-12)) return mult * mag;
    }
    return 10.0 * mag;
}

inline std::string trim_number(double v) {
    if (v == 0.0) return "0";
    if (std::fabs(v) >= 1e-4 && std::fabs(v) < 1e7) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return buf;
    }
    return csv::format_double(v);
}

}  // namespace detail

inline std::string line_plot(const std::vector<Series>& series, const std::string& x_label,
                             const std::string& y_label, int width = 860, int height = 520) {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12) {
        ymax = ymin + 1.0;
        ymin -= 1.0;
    }
    const double padY = 0.05 * (ymax - ymin);
    ymin -= padY;
    ymax += padY;

    const int ml = 70, mr = 24, mt = 24, mb = 52;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto X = [&](double v) { return ml + pw * (v - xmin) / (xmax - xmin); };
    auto Y = [&](double v) { return mt + ph * (1.0 - (v - ymin) / (ymax - ymin)); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " +
           std::to_string(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    auto fmt = [](double v) { return detail::trim_number(v); };
    const double sx = detail::nice_step(xmax - xmin, 6);
    for (double t = std::ceil(xmin / sx) * sx; t <= xmax + 1e-9 * sx; t += sx) {
        const double px = X(t);
        out += "<line x1=\"" + fmt(px) + "\" y1=\"" + std::to_string(mt) + "\" x2=\"" + fmt(px) +
               "\" y2=\"" + std::to_string(height - mb) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + fmt(px) + "\" y=\"" + std::to_string(height - mb + 18) +
               "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">" + fmt(t) +
               "</text>\n";
    }
    const double sy = detail::nice_step(ymax - ymin, 6);
    for (double t = std::ceil(ymin / sy) * sy; t <= ymax + 1e-9 * sy; t += sy) {
        const double py = Y(t);
        out += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + fmt(py) + "\" x2=\"" +
               std::to_string(width - mr) + "\" y2=\"" + fmt(py) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + std::to_string(ml - 8) + "\" y=\"" + fmt(py + 4) +
               "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">" + fmt(t) +
               "</text>\n";
    }

    // axes
    out += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(height - mb) + "\" x2=\"" +
           std::to_string(width - mr) + "\" y2=\"" + std::to_string(height - mb) +
           "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    out += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(mt) + "\" x2=\"" +
           std::to_string(ml) + "\" y2=\"" + std::to_string(height - mb) +
           "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    out += "<text x=\"" + std::to_string(ml + static_cast<int>(pw) / 2) + "\" y=\"" +
           std::to_string(height - 10) +
           "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\">" + x_label +
           "</text>\n";
    out += "<text x=\"18\" y=\"" + std::to_string(mt + static_cast<int>(ph) / 2) +
           "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\" transform=\"rotate(-90 18 " +
           std::to_string(mt + static_cast<int>(ph) / 2) + ")\">" + y_label + "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            pts += fmt(X(s.x[i])) + "," + fmt(Y(s.y[i])) + " ";
        out += "<polyline fill=\"none\" stroke=\"" + std::string(palette[si % 6]) +
               "\" stroke-width=\"1.8\" points=\"" + pts + "\"/>\n";
        const int ly = mt + 18 + static_cast<int>(si) * 18;
        out += "<line x1=\"" + std::to_string(width - mr - 130) + "\" y1=\"" + std::to_string(ly - 4) +
               "\" x2=\"" + std::to_string(width - mr - 104) + "\" y2=\"" + std::to_string(ly - 4) +
               "\" stroke=\"" + palette[si % 6] + "\" stroke-width=\"3\"/>\n";
        out += "<text x=\"" + std::to_string(width - mr - 98) + "\" y=\"" + std::to_string(ly) +
               "\" font-size=\"12\" font-family=\"sans-serif\">" + s.name + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace nablafc::svg
