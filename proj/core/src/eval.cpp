#include "dispvo/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dispvo/errors.hpp"

namespace dispvo {

std::vector<double> trajectory_distances(std::span<const Pose> poses) {
    std::vector<double> dist;
    if (poses.empty()) return dist;
    dist.reserve(poses.size());
    dist.push_back(0.0);
    for (std::size_t k = 1; k < poses.size(); ++k) {
        dist.push_back(dist.back() + (poses[k].position - poses[k - 1].position).norm());
    }
    return dist;
}

std::optional<std::size_t> last_frame_from_segment_length(std::span<const double> dist, std::size_t first,
                                                          double length) {
    for (std::size_t i = first; i < dist.size(); ++i) {
        if (dist[i] >= dist[first] + length) return i;
    }
    return std::nullopt;
}

double rotation_error(const Pose& error) {
    // Same angle as acos((trace - 1) / 2), but the sine from the skew part keeps
    // small angles accurate and an exactly symmetric error gives exactly zero.
    const Mat3& m = error.rotation.matrix();
    const double s = 0.5 * Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)).norm();
    const double c = 0.5 * (m.trace() - 1.0);
    return std::atan2(s, std::clamp(c, -1.0, 1.0));
}

double translation_error(const Pose& error) { return error.position.norm(); }

SequenceReport evaluate_sequence(std::span<const Pose> gt, std::span<const Pose> pred, std::string sequence_id) {
    if (gt.size() != pred.size()) {
        throw InputError("ground truth has " + std::to_string(gt.size()) + " poses but prediction has " +
                         std::to_string(pred.size()));
    }
    if (gt.size() < 2) throw InputError("evaluation needs at least two poses");

    SequenceReport report;
    report.sequence_id = std::move(sequence_id);
    const std::vector<double> dist = trajectory_distances(gt);
    for (std::size_t first = 0; first < gt.size(); first += kSegmentStep) {
        for (double len : kSegmentLengths) {
            const auto last = last_frame_from_segment_length(dist, first, len);
            if (!last) continue;
            const Pose delta_gt = compose(inverse(gt[first]), gt[*last]);
            const Pose delta_pred = compose(inverse(pred[first]), pred[*last]);
            const Pose err = compose(inverse(delta_gt), delta_pred);
            report.segments.push_back({first, *last, len, translation_error(err) / len, rotation_error(err) / len});
        }
    }
    if (!report.segments.empty()) {
        double t = 0.0, r = 0.0;
        for (const auto& s : report.segments) {
            t += s.trans_err;
            r += s.rot_err;
        }
        const double n = static_cast<double>(report.segments.size());
        report.trans_pct = 100.0 * t / n;
        report.rot_deg_per_m = (180.0 / std::numbers::pi) * r / n;
    }
    return report;
}

BenchmarkSummary summarize(std::span<const SequenceReport> reports, std::string name) {
    if (reports.empty()) throw InputError("summary needs at least one sequence report");
    BenchmarkSummary s;
    s.name = std::move(name);
    s.reports.assign(reports.begin(), reports.end());

    std::vector<const SequenceReport*> valid;
    for (const auto& r : reports) if (!r.empty()) valid.push_back(&r);
    if (valid.empty()) return s;

    const double n = static_cast<double>(valid.size());
    for (const auto* r : valid) {
        s.avg.trans_pct += r->trans_pct;
        s.avg.rot_deg_per_m += r->rot_deg_per_m;
    }
    s.avg.trans_pct /= n;
    s.avg.rot_deg_per_m /= n;
    for (const auto* r : valid) {
        s.stddev.trans_pct += (r->trans_pct - s.avg.trans_pct) * (r->trans_pct - s.avg.trans_pct);
        s.stddev.rot_deg_per_m += (r->rot_deg_per_m - s.avg.rot_deg_per_m) * (r->rot_deg_per_m - s.avg.rot_deg_per_m);
    }
    s.stddev.trans_pct = std::sqrt(s.stddev.trans_pct / n);
    s.stddev.rot_deg_per_m = std::sqrt(s.stddev.rot_deg_per_m / n);

    double t = 0.0, r = 0.0;
    std::size_t segments = 0;
    for (const auto* rep : valid) {
        for (const auto& seg : rep->segments) {
            t += seg.trans_err;
            r += seg.rot_err;
        }
        segments += rep->segments.size();
    }
    s.segment_weighted.trans_pct = 100.0 * t / static_cast<double>(segments);
    s.segment_weighted.rot_deg_per_m = (180.0 / std::numbers::pi) * r / static_cast<double>(segments);
    return s;
}

}  // namespace dispvo
