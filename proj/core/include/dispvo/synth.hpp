#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dispvo/disparity.hpp"
#include "dispvo/pose.hpp"

namespace dispvo {

enum class MotionProfile {
    Static,   // camera never moves
    Forward,  // constant speed along the optical axis, no rotation
    Random,   // per-frame speed and heading/attitude increments drawn uniformly
};

/// Scene and trajectory parameters for the synthetic disparity generator.
/// Camera axes follow the KITTI convention: x right, y down, z forward.
struct SynthConfig {
    int width = 192;
    int height = 64;
    int frames = 100;
    MotionProfile profile = MotionProfile::Random;

    double speed_mean = 1.0;      // meters per frame
    double speed_jitter = 0.4;    // half-width of the uniform speed band
    double turn_rate_max = 0.03;   // radians per frame about the camera y axis
    double tilt_rate_max = 0.0;  // about camera x
    double bank_rate_max = 0.0;   // about camera z

    int min_boxes = 20;
    int max_boxes = 50;
    double min_depth = 5.0;  // box placement band ahead of the camera
    double max_depth = 80.0;
    double min_lateral = 3.0;
    double max_lateral = 12.0;

    double camera_height = 1.65;    // ground plane sits at y = camera_height
    double disparity_scale = 2.0;   // disparity = clamp(scale / depth, 0, 1)
    double focal_ratio = 0.6;       // focal length in pixels = focal_ratio * width

    /// Throws InputError on a degenerate configuration.
    void validate() const;
};

struct Box {
    Vec3 min;
    Vec3 max;
};

struct Intrinsics {
    double focal;
    double cx;
    double cy;
    int width;
    int height;
};

struct SyntheticSequence {
    std::vector<DisparityMap> frames;
    std::vector<Pose> poses;
    /// motions[k] is the exact motion from frame k to frame k+1 used to build poses.
    std::vector<RelativeMotion> motions;
    std::vector<Box> boxes;
    Intrinsics intrinsics;
};

Intrinsics make_intrinsics(const SynthConfig& cfg);

/// Camera-frame depth of the first surface hit through pixel centre (row, col), or 0 for sky.
double render_depth(std::span<const Box> boxes, double ground_y, const Pose& camera, const Intrinsics& k, int row,
                    int col);

DisparityMap render_disparity(std::span<const Box> boxes, const SynthConfig& cfg, const Pose& camera,
                              const Intrinsics& k, int frame_index);

/// Deterministic for a fixed (config, seed).
SyntheticSequence generate_synthetic_sequence(const SynthConfig& cfg, std::uint64_t seed);

}  // namespace dispvo
