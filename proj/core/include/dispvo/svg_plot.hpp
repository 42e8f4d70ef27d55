#pragma once

#include <span>
#include <string>
#include <vector>

#include "dispvo/pose.hpp"

namespace dispvo {

struct PlotSeries {
    std::string label;
    std::vector<Pose> poses;
};

struct PlotOptions {
    int width = 640;
    int height = 640;
    int margin = 48;
};

/// Bird's-eye view (x right, z up the page) with a shared, equal-aspect scale
/// and one legend entry per series. Output bytes depend only on the inputs.
/// Throws InputError when no series is given or a series has no poses.
std::string render_trajectory_svg(std::span<const PlotSeries> series, const PlotOptions& options = {});

}  // namespace dispvo
