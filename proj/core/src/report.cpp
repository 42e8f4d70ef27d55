#include "dispvo/report.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "dispvo/errors.hpp"

namespace dispvo {

namespace {

std::string cells(const MetricRow& m) { return fmt::format("{:.3f},{:.4f}", m.trans_pct, m.rot_deg_per_m); }

}  // namespace

std::string format_sequence_table(const BenchmarkSummary& summary) {
    std::string out = std::string(kReportHeader) + "\n";
    for (const auto& r : summary.reports) {
        if (r.empty()) {
            out += fmt::format("{},-,-\n", r.sequence_id);
        } else {
            out += fmt::format("{},{}\n", r.sequence_id, cells({r.trans_pct, r.rot_deg_per_m}));
        }
    }
    out += "avg," + cells(summary.avg) + "\n";
    out += "std," + cells(summary.stddev) + "\n";
    out += "seg_avg," + cells(summary.segment_weighted) + "\n";
    return out;
}

std::vector<BenchmarkSummary> compare_runs(std::span<const BenchmarkSummary> summaries) {
    if (summaries.empty()) throw InputError("comparison needs at least one run");
    std::vector<BenchmarkSummary> ranked(summaries.begin(), summaries.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const BenchmarkSummary& a, const BenchmarkSummary& b) {
        if (a.avg.trans_pct != b.avg.trans_pct) return a.avg.trans_pct < b.avg.trans_pct;
        if (a.avg.rot_deg_per_m != b.avg.rot_deg_per_m) return a.avg.rot_deg_per_m < b.avg.rot_deg_per_m;
        return a.name < b.name;
    });
    return ranked;
}

std::string format_comparison_table(std::span<const BenchmarkSummary> summaries) {
    const auto ranked = compare_runs(summaries);
    std::vector<std::string> ids;
    for (const auto& s : ranked) {
        for (const auto& r : s.reports) {
            if (std::find(ids.begin(), ids.end(), r.sequence_id) == ids.end()) ids.push_back(r.sequence_id);
        }
    }
    std::string out = "Seq";
    for (const auto& s : ranked) out += fmt::format(",{} Trans[%],{} Rot[deg/m]", s.name, s.name);
    out += "\n";
    for (const auto& id : ids) {
        out += id;
        for (const auto& s : ranked) {
            const auto it = std::find_if(s.reports.begin(), s.reports.end(),
                                         [&](const SequenceReport& r) { return r.sequence_id == id; });
            if (it == s.reports.end() || it->empty()) {
                out += ",-,-";
            } else {
                out += "," + cells({it->trans_pct, it->rot_deg_per_m});
            }
        }
        out += "\n";
    }
    out += "avg";
    for (const auto& s : ranked) out += "," + cells(s.avg);
    out += "\nstd";
    for (const auto& s : ranked) out += "," + cells(s.stddev);
    out += "\n";
    return out;
}

}  // namespace dispvo
