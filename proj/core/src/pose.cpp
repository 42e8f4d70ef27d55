#include "dispvo/pose.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "dispvo/errors.hpp"

namespace dispvo {

namespace {

constexpr double kPi = std::numbers::pi;

// atan2 yields [-pi, pi]; fold -pi onto pi so angles live in (-pi, pi].
double wrap_half_open(double a) { return a <= -kPi ? a + 2.0 * kPi : a; }

Mat3 skew(const Vec3& v) {
    Mat3 s;
    s << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return s;
}

Vec3 vee_antisymmetric(const Mat3& m) {
    return 0.5 * Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

}  // namespace

double orthogonality_defect(const Mat3& m) {
    return (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
}

RotationMatrix RotationMatrix::from_matrix(const Mat3& m, double tol) {
    if (!m.allFinite()) throw ValidationError("rotation matrix has non-finite entries");
    if (orthogonality_defect(m) > tol) throw ValidationError("matrix is not orthogonal");
    if (std::abs(m.determinant() - 1.0) > tol) throw ValidationError("matrix determinant is not +1");
    return RotationMatrix(m);
}

RotationMatrix RotationMatrix::project(const Mat3& m) {
    if (!m.allFinite()) throw ValidationError("cannot project non-finite matrix");
    if (m.determinant() <= 0.0) throw ValidationError("cannot project matrix with det <= 0 onto SO(3)");

    // Newton-Schulz polar iteration near SO(3), SVD otherwise. Both converge
    // to the orthogonal polar factor, which is the Frobenius-nearest rotation.
    Mat3 x = m;
    double defect = orthogonality_defect(x);
    if (defect < 0.1) {
        for (int it = 0; it < 32 && defect > 1e-15; ++it) {
            const Mat3 next = 0.5 * x * (3.0 * Mat3::Identity() - x.transpose() * x);
            const double next_defect = orthogonality_defect(next);
            if (next_defect >= defect) break;
            x = next;
            defect = next_defect;
        }
        return RotationMatrix(x);
    }
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return RotationMatrix(svd.matrixU() * svd.matrixV().transpose());
}

RotationMatrix rot_x(double a) {
    Mat3 m;
    m << 1.0, 0.0, 0.0,
         0.0, std::cos(a), -std::sin(a),
         0.0, std::sin(a), std::cos(a);
    return RotationMatrix::from_matrix(m);
}

RotationMatrix rot_y(double a) {
    Mat3 m;
    m << std::cos(a), 0.0, std::sin(a),
         0.0, 1.0, 0.0,
        -std::sin(a), 0.0, std::cos(a);
    return RotationMatrix::from_matrix(m);
}

RotationMatrix rot_z(double a) {
    Mat3 m;
    m << std::cos(a), -std::sin(a), 0.0,
         std::sin(a), std::cos(a), 0.0,
         0.0, 0.0, 1.0;
    return RotationMatrix::from_matrix(m);
}

RelativeMotion RelativeMotion::from_rotation(const RotationMatrix& r, const Vec3& t) {
    return {r, rotmat_to_euler(r), t};
}

RelativeMotion RelativeMotion::from_euler(const EulerAngles& e, const Vec3& t) {
    return {euler_to_rotmat(e), e, t};
}

EulerAngles rotmat_to_euler(const RotationMatrix& rot) {
    const Mat3& r = rot.matrix();
    const double cos_pitch = std::hypot(r(0, 0), r(1, 0));
    EulerAngles e;
    e.pitch = std::atan2(-r(2, 0), cos_pitch);
    if (cos_pitch > 1e-12) {
        e.roll = wrap_half_open(std::atan2(r(2, 1), r(2, 2)));
        e.yaw = wrap_half_open(std::atan2(r(1, 0), r(0, 0)));
    } else {
        // Gimbal lock: roll and yaw share one degree of freedom.
        e.pitch = r(2, 0) < 0.0 ? kPi / 2.0 : -kPi / 2.0;
        e.roll = 0.0;
        e.yaw = wrap_half_open(std::atan2(-r(0, 1), r(1, 1)));
    }
    return e;
}

RotationMatrix euler_to_rotmat(const EulerAngles& e) {
    const double cr = std::cos(e.roll), sr = std::sin(e.roll);
    const double cp = std::cos(e.pitch), sp = std::sin(e.pitch);
    const double cy = std::cos(e.yaw), sy = std::sin(e.yaw);
    Mat3 m;
    m << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
         sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
         -sp, cp * sr, cp * cr;
    return RotationMatrix::from_matrix(m);
}

Quaternion rotmat_to_quaternion(const RotationMatrix& rot) {
    const Mat3& r = rot.matrix();
    const double tr = r.trace();
    Quaternion q;
    if (tr > 0.0) {
        const double s = 2.0 * std::sqrt(tr + 1.0);
        q = {0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s, (r(1, 0) - r(0, 1)) / s};
    } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
        q = {(r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s};
    } else if (r(1, 1) > r(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
        q = {(r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s, (r(1, 2) + r(2, 1)) / s};
    } else {
        const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
        q = {(r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, 0.25 * s};
    }
    bool flip = q.w < 0.0;
    if (q.w == 0.0) {
        // Half-turn: both signs have w = 0, pick the one whose first nonzero
        // vector component is positive.
        const double lead = q.x != 0.0 ? q.x : (q.y != 0.0 ? q.y : q.z);
        flip = lead < 0.0;
    }
    if (flip) q = {-q.w, -q.x, -q.y, -q.z};
    const double n = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
    return {q.w / n, q.x / n, q.y / n, q.z / n};
}

RotationMatrix quaternion_to_rotmat(const Quaternion& q_in) {
    const double n = std::sqrt(q_in.w * q_in.w + q_in.x * q_in.x + q_in.y * q_in.y + q_in.z * q_in.z);
    if (!(n > 0.0) || !std::isfinite(n)) throw InputError("quaternion must have finite nonzero norm");
    const double w = q_in.w / n, x = q_in.x / n, y = q_in.y / n, z = q_in.z / n;
    Mat3 m;
    m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
         2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
         2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return RotationMatrix::from_matrix(m);
}

AxisAngle rotmat_to_axisangle(const RotationMatrix& rot) {
    const Mat3& r = rot.matrix();
    const Vec3 sin_axis = vee_antisymmetric(r);  // sin(theta) * axis
    const double s = sin_axis.norm();
    const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
    const double theta = std::atan2(s, c);
    if (theta < 1e-8) {
        return {sin_axis};  // theta ~ sin(theta) at this scale
    }
    if (theta <= kPi / 2.0) {
        return {sin_axis * (theta / s)};
    }
    // Beyond a quarter turn read the axis from the symmetric part,
    // (R + Rᵀ)/2 = cos(theta) I + (1 - cos(theta)) a aᵀ, which stays well
    // conditioned up to theta = pi.
    const Mat3 outer = (0.5 * (r + r.transpose()) - c * Mat3::Identity()) / (1.0 - c);
    int k = 0;
    outer.diagonal().maxCoeff(&k);
    Vec3 axis = outer.col(k) / std::sqrt(std::max(outer(k, k), 0.0));
    axis.normalize();
    if (axis.dot(sin_axis) < 0.0) axis = -axis;
    if (s == 0.0) {
        const double lead = axis.x() != 0.0 ? axis.x() : (axis.y() != 0.0 ? axis.y() : axis.z());
        if (lead < 0.0) axis = -axis;
    }
    return {axis * theta};
}

RotationMatrix axisangle_to_rotmat(const AxisAngle& a) {
    const double theta = a.v.norm();
    const Mat3 k = skew(a.v);
    if (theta < 1e-8) {
        return RotationMatrix::project(Mat3::Identity() + k + 0.5 * k * k);
    }
    const Mat3 m = Mat3::Identity() + (std::sin(theta) / theta) * k +
                   ((1.0 - std::cos(theta)) / (theta * theta)) * k * k;
    return RotationMatrix::from_matrix(m);
}

Pose compose(const Pose& a, const Pose& b) {
    return {a.rotation * b.rotation, a.position + a.rotation * b.position};
}

Pose inverse(const Pose& p) {
    const RotationMatrix r_inv = p.rotation.inverse();
    return {r_inv, -(r_inv * p.position)};
}

RelativeMotion relative_pose(const Pose& pose_i, const Pose& pose_j) {
    const RotationMatrix r_i_inv = pose_i.rotation.inverse();
    const Vec3 displacement = pose_j.position - pose_i.position;
    return RelativeMotion::from_rotation(r_i_inv * pose_j.rotation, r_i_inv * displacement);
}

Pose integrate_step(const Pose& state_i, const RelativeMotion& motion) {
    Pose out;
    out.position = state_i.position + state_i.rotation * motion.translation;
    out.rotation = RotationMatrix::project((state_i.rotation * motion.rotation).matrix());
    return out;
}

std::vector<Pose> integrate_trajectory(std::span<const RelativeMotion> motions) {
    std::vector<Pose> poses;
    poses.reserve(motions.size() + 1);
    poses.emplace_back();
    for (const auto& m : motions) poses.push_back(integrate_step(poses.back(), m));
    return poses;
}

std::vector<RelativeMotion> consecutive_motions(std::span<const Pose> poses) {
    std::vector<RelativeMotion> motions;
    if (poses.size() < 2) return motions;
    motions.reserve(poses.size() - 1);
    for (std::size_t k = 0; k + 1 < poses.size(); ++k) motions.push_back(relative_pose(poses[k], poses[k + 1]));
    return motions;
}

}  // namespace dispvo
