#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dispvo/pose.hpp"

namespace dispvo {

/// Subsequence lengths (meters) and start-frame stride of the KITTI odometry devkit.
inline constexpr std::array<double, 8> kSegmentLengths{100, 200, 300, 400, 500, 600, 700, 800};
inline constexpr std::size_t kSegmentStep = 10;

struct SegmentError {
    std::size_t first_frame = 0;
    std::size_t last_frame = 0;
    double length = 0.0;     // meters
    double trans_err = 0.0;  // ratio
    double rot_err = 0.0;    // radians per meter
};

struct SequenceReport {
    std::string sequence_id;
    double trans_pct = 0.0;      // 100 * mean(trans_err)
    double rot_deg_per_m = 0.0;  // (180/pi) * mean(rot_err)
    std::vector<SegmentError> segments;

    /// True when the trajectory is too short for any segment (< 100 m).
    bool empty() const { return segments.empty(); }
};

struct MetricRow {
    double trans_pct = 0.0;
    double rot_deg_per_m = 0.0;
};

struct BenchmarkSummary {
    std::string name;
    std::vector<SequenceReport> reports;
    MetricRow avg;               // arithmetic mean over non-empty sequences
    MetricRow stddev;             // population standard deviation over non-empty sequences
    MetricRow segment_weighted;  // mean over all pooled segments (devkit-style average)
};

/// d[0] = 0, d[k] = d[k-1] + |P_k - P_{k-1}|.
std::vector<double> trajectory_distances(std::span<const Pose> poses);

/// First frame at or after `first` whose distance reaches dist[first] + length.
std::optional<std::size_t> last_frame_from_segment_length(std::span<const double> dist, std::size_t first,
                                                          double length);

/// Rotation angle of a pose error in [0, pi].
double rotation_error(const Pose& error);
double translation_error(const Pose& error);

/// Throws InputError when lengths differ or fewer than two poses are given.
SequenceReport evaluate_sequence(std::span<const Pose> gt, std::span<const Pose> pred, std::string sequence_id = {});

/// Throws InputError on an empty report list.
BenchmarkSummary summarize(std::span<const SequenceReport> reports, std::string name = {});

}  // namespace dispvo
