#include "dispvo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dispvo/errors.hpp"

namespace dispvo {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

// Slab test; returns entry distance or +inf.
double ray_box(const Vec3& o, const Vec3& d, const Box& b) {
    double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
        if (d(a) == 0.0) {
            if (o(a) < b.min(a) || o(a) > b.max(a)) return std::numeric_limits<double>::infinity();
            continue;
        }
        const double inv = 1.0 / d(a);
        double ta = (b.min(a) - o(a)) * inv;
        double tb = (b.max(a) - o(a)) * inv;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return std::numeric_limits<double>::infinity();
    }
    return t0 > 1e-9 ? t0 : std::numeric_limits<double>::infinity();
}

bool box_clears_route(const Box& b, std::span<const Pose> poses, double margin) {
    for (const auto& p : poses) {
        const Vec3& c = p.position;
        if (c.x() > b.min.x() - margin && c.x() < b.max.x() + margin && c.z() > b.min.z() - margin &&
            c.z() < b.max.z() + margin) {
            return false;
        }
    }
    return true;
}

}  // namespace

void SynthConfig::validate() const {
    if (frames < 1) throw InputError("synthetic sequence needs at least one frame");
    if (width < 1 || height < 1) throw InputError("synthetic resolution must be positive");
    if (min_boxes < 0 || max_boxes < min_boxes) throw InputError("box count range is invalid");
    if (!(min_depth > 0.0) || max_depth < min_depth) throw InputError("box depth band is invalid");
    if (min_lateral < 0.0 || max_lateral < min_lateral) throw InputError("box lateral band is invalid");
    if (!(camera_height > 0.0) || !(disparity_scale > 0.0) || !(focal_ratio > 0.0)) {
        throw InputError("camera height, disparity scale and focal ratio must be positive");
    }
    if (speed_mean < 0.0 || speed_jitter < 0.0 || turn_rate_max < 0.0 || tilt_rate_max < 0.0 || bank_rate_max < 0.0) {
        throw InputError("motion magnitudes must be non-negative");
    }
}

Intrinsics make_intrinsics(const SynthConfig& cfg) {
    return {cfg.focal_ratio * cfg.width, 0.5 * cfg.width, 0.5 * cfg.height, cfg.width, cfg.height};
}

double render_depth(std::span<const Box> boxes, double ground_y, const Pose& camera, const Intrinsics& k, int row,
                    int col) {
    const Vec3 d_cam((col + 0.5 - k.cx) / k.focal, (row + 0.5 - k.cy) / k.focal, 1.0);
    const Vec3 d = camera.rotation * d_cam;
    const Vec3& o = camera.position;
    // d_cam has unit z, so the ray parameter equals camera-frame depth.
    double best = std::numeric_limits<double>::infinity();
    if (d.y() > 0.0) {
        const double t = (ground_y - o.y()) / d.y();
        if (t > 0.0) best = t;
    }
    for (const auto& b : boxes) best = std::min(best, ray_box(o, d, b));
    return std::isfinite(best) ? best : 0.0;
}

DisparityMap render_disparity(std::span<const Box> boxes, const SynthConfig& cfg, const Pose& camera,
                              const Intrinsics& k, int frame_index) {
    DisparityMap m;
    m.width = k.width;
    m.height = k.height;
    m.frame_index = frame_index;
    m.values.resize(static_cast<std::size_t>(k.width) * k.height);
    for (int r = 0; r < k.height; ++r) {
        for (int c = 0; c < k.width; ++c) {
            const double depth = render_depth(boxes, cfg.camera_height, camera, k, r, c);
            const double disp = depth > 0.0 ? std::clamp(cfg.disparity_scale / depth, 0.0, 1.0) : 0.0;
            m.at(r, c) = static_cast<float>(disp);
        }
    }
    return m;
}

SyntheticSequence generate_synthetic_sequence(const SynthConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    std::mt19937_64 rng(seed);
    SyntheticSequence seq;
    seq.intrinsics = make_intrinsics(cfg);

    seq.motions.reserve(static_cast<std::size_t>(cfg.frames - 1));
    for (int k = 0; k + 1 < cfg.frames; ++k) {
        EulerAngles e;
        double speed = 0.0;
        switch (cfg.profile) {
            case MotionProfile::Static:
                break;
            case MotionProfile::Forward:
                speed = cfg.speed_mean;
                break;
            case MotionProfile::Random:
                speed = std::max(0.0, uniform(rng, cfg.speed_mean - cfg.speed_jitter, cfg.speed_mean + cfg.speed_jitter));
                // Camera y is "pitch" in the Z-Y-X factorization, so turning lands there.
                e.pitch = uniform(rng, -cfg.turn_rate_max, cfg.turn_rate_max);
                e.roll = uniform(rng, -cfg.tilt_rate_max, cfg.tilt_rate_max);
                e.yaw = uniform(rng, -cfg.bank_rate_max, cfg.bank_rate_max);
                break;
        }
        seq.motions.push_back(RelativeMotion::from_euler(e, Vec3(0.0, 0.0, speed)));
    }
    seq.poses = integrate_trajectory(seq.motions);

    const int box_count = cfg.min_boxes + static_cast<int>(rng() % static_cast<std::uint64_t>(cfg.max_boxes - cfg.min_boxes + 1));
    int attempts = 0;
    while (static_cast<int>(seq.boxes.size()) < box_count && attempts < 100 * (box_count + 1)) {
        ++attempts;
        const auto anchor_frame = static_cast<std::size_t>(rng() % seq.poses.size());
        const Pose& anchor = seq.poses[anchor_frame];
        const double side = unit(rng) < 0.5 ? -1.0 : 1.0;
        const Vec3 offset(side * uniform(rng, cfg.min_lateral, cfg.max_lateral), 0.0,
                          uniform(rng, cfg.min_depth, cfg.max_depth));
        const Vec3 centre = anchor.position + anchor.rotation * offset;
        const double half_w = 0.5 * uniform(rng, 1.0, 4.0);
        const double half_d = 0.5 * uniform(rng, 1.0, 4.0);
        const double height = uniform(rng, 1.5, 6.0);
        Box b{Vec3(centre.x() - half_w, cfg.camera_height - height, centre.z() - half_d),
              Vec3(centre.x() + half_w, cfg.camera_height, centre.z() + half_d)};
        if (box_clears_route(b, seq.poses, 1.5)) seq.boxes.push_back(b);
    }

    seq.frames.reserve(seq.poses.size());
    for (std::size_t k = 0; k < seq.poses.size(); ++k) {
        seq.frames.push_back(render_disparity(seq.boxes, cfg, seq.poses[k], seq.intrinsics, static_cast<int>(k)));
    }
    return seq;
}

}  // namespace dispvo
