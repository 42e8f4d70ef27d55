#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dispvo/pose.hpp"

namespace dispvo {

/// Orthogonality defect up to which a parsed rotation is silently re-projected.
inline constexpr double kParseRotationTolerance = 1e-3;

/// One pose per nonempty line, 12 reals forming the row-major 3x4 matrix [R | P].
/// Throws ParseError (with line number) or ValidationError.
std::vector<Pose> parse_kitti_poses(std::istream& in);
std::vector<Pose> read_kitti_poses(const std::filesystem::path& file);

/// Shortest round-tripping decimal form, so identity prints as "1 0 0 0 0 1 0 0 0 0 1 0".
std::string format_kitti_line(const Mat3& r, const Vec3& t);
std::string format_kitti_pose(const Pose& pose);

void write_kitti_poses(std::ostream& out, std::span<const Pose> poses);
void write_kitti_poses(const std::filesystem::path& file, std::span<const Pose> poses);

/// Relative motions share the layout: [R_ji | T_ji] per line.
std::vector<RelativeMotion> parse_motions(std::istream& in);
std::vector<RelativeMotion> read_motions(const std::filesystem::path& file);
void write_motions(std::ostream& out, std::span<const RelativeMotion> motions);
void write_motions(const std::filesystem::path& file, std::span<const RelativeMotion> motions);

/// Round-trip decimal formatting shared by all text outputs; -0 prints as 0.
std::string format_real(double v);

}  // namespace dispvo
