#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace dispvo {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Element-wise tolerance used for SO(3) membership checks.
inline constexpr double kRotationTolerance = 1e-9;

/// Max |(mᵀm − I)_ij|.
double orthogonality_defect(const Mat3& m);

/// A 3x3 matrix known to lie in SO(3).
///
/// Instances can only be created through validated or projecting factories,
/// so every RotationMatrix in flight satisfies mᵀm = I and det = +1 to within
/// kRotationTolerance.
class RotationMatrix {
public:
    RotationMatrix() : m_(Mat3::Identity()) {}

    static RotationMatrix identity() { return {}; }

    /// Throws ValidationError if `m` is not a rotation within `tol`.
    static RotationMatrix from_matrix(const Mat3& m, double tol = kRotationTolerance);

    /// Nearest rotation in the Frobenius sense (orthogonal polar factor).
    /// Throws ValidationError when `m` is singular or has det <= 0.
    static RotationMatrix project(const Mat3& m);

    const Mat3& matrix() const { return m_; }
    double operator()(int r, int c) const { return m_(r, c); }

    RotationMatrix inverse() const { return RotationMatrix(m_.transpose()); }
    RotationMatrix operator*(const RotationMatrix& rhs) const { return RotationMatrix(m_ * rhs.m_); }
    Vec3 operator*(const Vec3& v) const { return m_ * v; }

private:
    explicit RotationMatrix(const Mat3& m) : m_(m) {}

    Mat3 m_;
};

RotationMatrix rot_x(double angle);
RotationMatrix rot_y(double angle);
RotationMatrix rot_z(double angle);

/// Z-Y-X (yaw-pitch-roll) angles: R = Rz(yaw) * Ry(pitch) * Rx(roll).
struct EulerAngles {
    double roll = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;

    Vec3 as_vector() const { return {roll, pitch, yaw}; }
    static EulerAngles from_vector(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

/// Unit quaternion, canonical sign w >= 0.
struct Quaternion {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Rotation vector: unit axis scaled by the angle in [0, pi].
struct AxisAngle {
    Vec3 v = Vec3::Zero();

    double angle() const { return v.norm(); }
};

/// World-frame absolute pose of one frame.
struct Pose {
    RotationMatrix rotation;
    Vec3 position = Vec3::Zero();
};

/// Motion of frame j expressed in the coordinates of frame i.
struct RelativeMotion {
    RotationMatrix rotation;
    EulerAngles euler;
    Vec3 translation = Vec3::Zero();

    static RelativeMotion identity() { return {}; }
    static RelativeMotion from_rotation(const RotationMatrix& r, const Vec3& t);
    static RelativeMotion from_euler(const EulerAngles& e, const Vec3& t);
};

EulerAngles rotmat_to_euler(const RotationMatrix& r);
RotationMatrix euler_to_rotmat(const EulerAngles& e);

Quaternion rotmat_to_quaternion(const RotationMatrix& r);
/// Normalizes `q` before conversion. Throws InputError on a zero quaternion.
RotationMatrix quaternion_to_rotmat(const Quaternion& q);

AxisAngle rotmat_to_axisangle(const RotationMatrix& r);
RotationMatrix axisangle_to_rotmat(const AxisAngle& a);

/// a ∘ b: rotation a.R b.R, position a.P + a.R b.P. No re-orthonormalization.
Pose compose(const Pose& a, const Pose& b);
Pose inverse(const Pose& p);

/// R_ji = R_i⁻¹ R_j, T_ji = R_i⁻¹ (P_j − P_i).
RelativeMotion relative_pose(const Pose& pose_i, const Pose& pose_j);

/// P_j = P_i + R_i T_ji, R_j = R_i R_ji, followed by re-orthonormalization.
Pose integrate_step(const Pose& state_i, const RelativeMotion& motion);

/// Chains motions from the identity pose at the origin; returns motions.size() + 1 poses.
std::vector<Pose> integrate_trajectory(std::span<const RelativeMotion> motions);

/// Relative motions between consecutive poses; the inverse of integrate_trajectory.
std::vector<RelativeMotion> consecutive_motions(std::span<const Pose> poses);

}  // namespace dispvo
