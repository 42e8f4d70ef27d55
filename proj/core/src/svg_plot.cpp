#include "dispvo/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include <fmt/format.h>

#include "dispvo/errors.hpp"

namespace dispvo {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
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

}  // namespace

std::string render_trajectory_svg(std::span<const PlotSeries> series, const PlotOptions& opt) {
    if (series.empty()) throw InputError("nothing to plot");
    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_z = min_x, max_z = -min_x;
    for (const auto& s : series) {
        if (s.poses.empty()) throw InputError("series '" + s.label + "' has no poses");
        for (const auto& p : s.poses) {
            min_x = std::min(min_x, p.position.x());
            max_x = std::max(max_x, p.position.x());
            min_z = std::min(min_z, p.position.z());
            max_z = std::max(max_z, p.position.z());
        }
    }
    const double span_x = std::max(max_x - min_x, 1e-9);
    const double span_z = std::max(max_z - min_z, 1e-9);
    const double inner_w = opt.width - 2.0 * opt.margin;
    const double inner_h = opt.height - 2.0 * opt.margin;
    const double scale = std::min(inner_w / span_x, inner_h / span_z);
    // Centre the data box inside the drawing area.
    const double off_x = opt.margin + 0.5 * (inner_w - scale * span_x);
    const double off_y = opt.margin + 0.5 * (inner_h - scale * span_z);
    auto px = [&](double x) { return off_x + scale * (x - min_x); };
    auto py = [&](double z) { return opt.height - (off_y + scale * (z - min_z)); };

    std::string out;
    out += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
        opt.width, opt.height);
    out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", opt.width, opt.height);
    out += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n",
        opt.margin, opt.margin, opt.width - 2 * opt.margin, opt.height - 2 * opt.margin);
    out += fmt::format("<text x=\"{:.3f}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">x [m]</text>\n",
                       0.5 * opt.width, opt.height - 12);
    out += fmt::format(
        "<text x=\"14\" y=\"{:.3f}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.3f})\">z [m]"
        "</text>\n",
        0.5 * opt.height, 0.5 * opt.height);

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % kPalette.size()];
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"", color);
        for (std::size_t k = 0; k < series[i].poses.size(); ++k) {
            const Vec3& p = series[i].poses[k].position;
            out += fmt::format("{}{:.3f},{:.3f}", k ? " " : "", px(p.x()), py(p.z()));
        }
        out += "\"/>\n";
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % kPalette.size()];
        const int y = opt.margin + 16 + static_cast<int>(i) * 18;
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           opt.margin + 8, y - 4, opt.margin + 28, y - 4, color);
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n", opt.margin + 34, y,
                           escape(series[i].label));
    }
    out += "</svg>\n";
    return out;
}

}  // namespace dispvo
