// SPDX-License-Identifier: Apache-2.0
//
// Minimal standalone SVG renderer for trajectory plots: one polyline per
// series over an axis box with the entanglement boundary C_E = 0 drawn as a
// gray rule. No display or font dependencies beyond the SVG text element.

#pragma once

#include "spintraj/trajectory.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace spintraj::io {

struct SvgSeries {
    const Trajectory* traj = nullptr;
    std::string color = "#1f6fb2";
    bool dashed = false;
};

inline void write_trajectory_svg(const std::string& path, const std::vector<SvgSeries>& series,
                                 const std::string& title) {
    if (series.empty()) throw Error("write_trajectory_svg: no series");
    const double width = 860, height = 480;
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    double tmin = 1e300, tmax = -1e300, cmin = 1e300, cmax = -1e300;
    for (const auto& s : series) {
        for (double v : s.traj->t) { tmin = std::min(tmin, v); tmax = std::max(tmax, v); }
        for (double v : s.traj->c_e) { cmin = std::min(cmin, v); cmax = std::max(cmax, v); }
    }
    if (tmax <= tmin) tmax = tmin + 1.0;
    const double pad = std::max(1e-12, 0.08 * (cmax - cmin));
    cmin -= pad;
    cmax += pad;
    if (cmin > 0.0) cmin = -0.1 * cmax;  // keep the boundary visible
    if (cmax < 0.0) cmax = -0.1 * cmin;

    auto px = [&](double t) { return ml + (t - tmin) / (tmax - tmin) * (width - ml - mr); };
    auto py = [&](double c) { return mt + (cmax - c) / (cmax - cmin) * (height - mt - mb); };
    auto num = [](double v) {
        char b[32];
        std::snprintf(b, sizeof(b), "%.6g", v);
        return std::string(b);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num(width / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" + title + "</text>\n";
    // axes box and boundary rule
    svg += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(width - ml - mr) +
           "\" height=\"" + num(height - mt - mb) +
           "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(py(0.0)) + "\" x2=\"" + num(width - mr) +
           "\" y2=\"" + num(py(0.0)) + "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    // tick labels at the corners of the data range
    svg += "<text x=\"" + num(ml) + "\" y=\"" + num(height - mb + 18) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + num(tmin) + "</text>\n";
    svg += "<text x=\"" + num(width - mr) + "\" y=\"" + num(height - mb + 18) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + num(tmax) +
           "</text>\n";
    svg += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(py(cmax) + 10) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + num(cmax) +
           "</text>\n";
    svg += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(py(cmin)) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + num(cmin) +
           "</text>\n";
    svg += "<text x=\"" + num(width / 2) + "\" y=\"" + num(height - 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">t "
           "(hbar/|J0|)</text>\n";
    svg += "<text x=\"16\" y=\"" + num(height / 2) +
           "\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
           num(height / 2) + ")\" text-anchor=\"middle\">C_E</text>\n";

    for (const auto& s : series) {
        // thin long series: cap polyline points for reasonable file sizes
        const size_t n = s.traj->t.size();
        const size_t stride = std::max<size_t>(1, n / 4000);
        svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.3\"";
        if (s.dashed) svg += " stroke-dasharray=\"6 4\"";
        svg += " points=\"";
        for (size_t i = 0; i < n; i += stride) {
            svg += num(px(s.traj->t[i])) + "," + num(py(s.traj->c_e[i]));
            if (i + stride < n) svg += " ";
        }
        svg += "\"/>\n";
    }
    svg += "</svg>\n";

    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << svg;
    if (!f) throw Error("write failed for '" + path + "'");
}

}  // namespace spintraj::io
