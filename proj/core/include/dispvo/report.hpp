#pragma once

#include <span>
#include <string>
#include <vector>

#include "dispvo/eval.hpp"

namespace dispvo {

/// Column order of every per-sequence report.
inline constexpr const char* kReportHeader = "Seq,Trans[%],Rot[deg/m]";

/// Comma-separated rows: header, one row per sequence, then "avg", "std" and
/// "seg_avg" (segment-weighted) rows. Trans has 3 decimals, Rot 4.
std::string format_sequence_table(const BenchmarkSummary& summary);

/// Summaries sorted by avg trans, then avg rot, then name.
std::vector<BenchmarkSummary> compare_runs(std::span<const BenchmarkSummary> summaries);

/// Side-by-side grid: one (Trans, Rot) column pair per run in ranked order,
/// one row per sequence id (first-appearance order), then avg and std rows.
std::string format_comparison_table(std::span<const BenchmarkSummary> summaries);

}  // namespace dispvo
