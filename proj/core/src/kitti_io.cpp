#include "dispvo/kitti_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <Eigen/LU>
#include <fmt/format.h>

#include "dispvo/errors.hpp"

namespace dispvo {

namespace {

using Row12 = std::array<double, 12>;

template <typename Fn>
void for_each_row(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::array<double, 12> row{};
        std::size_t count = 0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (true) {
            while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
            if (p >= end) break;
            const char* tok = p;
            while (p < end && *p != ' ' && *p != '\t' && *p != '\r') ++p;
            if (count >= row.size()) throw ParseError(line_no, "expected 12 values, found more");
            double v = 0.0;
            const auto res = std::from_chars(tok, p, v);
            if (res.ec != std::errc() || res.ptr != p || !std::isfinite(v)) {
                throw ParseError(line_no, "non-numeric value '" + std::string(tok, p) + "'");
            }
            row[count++] = v;
        }
        if (count == 0) continue;
        if (count != row.size()) throw ParseError(line_no, "expected 12 values, found " + std::to_string(count));
        fn(line_no, row);
    }
}

RotationMatrix rotation_from_row(std::size_t line_no, const Row12& row) {
    Mat3 r;
    r << row[0], row[1], row[2], row[4], row[5], row[6], row[8], row[9], row[10];
    if (orthogonality_defect(r) >= kParseRotationTolerance || r.determinant() <= 0.0) {
        throw ValidationError("line " + std::to_string(line_no) + ": rotation block is not in SO(3)");
    }
    return RotationMatrix::project(r);
}

}  // namespace

std::string format_real(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    return fmt::format("{}", v);
}

std::vector<Pose> parse_kitti_poses(std::istream& in) {
    std::vector<Pose> poses;
    for_each_row(in, [&](std::size_t line_no, const Row12& row) {
        poses.push_back({rotation_from_row(line_no, row), Vec3(row[3], row[7], row[11])});
    });
    return poses;
}

std::vector<Pose> read_kitti_poses(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open pose file " + file.string());
    return parse_kitti_poses(in);
}

std::string format_kitti_line(const Mat3& r, const Vec3& t) {
    std::string s;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            s += format_real(r(i, j));
            s += ' ';
        }
        s += format_real(t(i));
        if (i < 2) s += ' ';
    }
    return s;
}

std::string format_kitti_pose(const Pose& pose) { return format_kitti_line(pose.rotation.matrix(), pose.position); }

void write_kitti_poses(std::ostream& out, std::span<const Pose> poses) {
    for (const auto& p : poses) out << format_kitti_pose(p) << '\n';
}

void write_kitti_poses(const std::filesystem::path& file, std::span<const Pose> poses) {
    std::ofstream out(file);
    if (!out) throw InputError("cannot open " + file.string() + " for writing");
    write_kitti_poses(out, poses);
}

std::vector<RelativeMotion> parse_motions(std::istream& in) {
    std::vector<RelativeMotion> motions;
    for_each_row(in, [&](std::size_t line_no, const Row12& row) {
        motions.push_back(RelativeMotion::from_rotation(rotation_from_row(line_no, row), Vec3(row[3], row[7], row[11])));
    });
    return motions;
}

std::vector<RelativeMotion> read_motions(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open motion file " + file.string());
    return parse_motions(in);
}

void write_motions(std::ostream& out, std::span<const RelativeMotion> motions) {
    for (const auto& m : motions) out << format_kitti_line(m.rotation.matrix(), m.translation) << '\n';
}

void write_motions(const std::filesystem::path& file, std::span<const RelativeMotion> motions) {
    std::ofstream out(file);
    if (!out) throw InputError("cannot open " + file.string() + " for writing");
    write_motions(out, motions);
}

}  // namespace dispvo
