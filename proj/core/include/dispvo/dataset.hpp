#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "dispvo/disparity.hpp"
#include "dispvo/pose.hpp"

namespace dispvo {

/// Three consecutive frames (t, t+1, t+2) with their ground-truth poses.
struct TrainingTriple {
    std::array<DisparityMap, 3> frames;
    std::array<Pose, 3> poses;
};

/// Ordered pair of frames; target is `later` expressed in `earlier`'s frame.
struct PairSample {
    DisparityMap earlier;
    DisparityMap later;
    int gap = 1;
    RelativeMotion target;
};

/// Position of a pair inside its triple, in loss-term order.
struct PairSlot {
    int earlier;
    int later;
};
/// (t, t+1), (t+1, t+2), (t, t+2).
inline constexpr std::array<PairSlot, 3> kTriplePairs{{{0, 1}, {1, 2}, {0, 2}}};

struct SequenceSplit {
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;

    /// Sequences 00-07 for training and 08-10 for testing.
    static SequenceSplit kitti_default();
    /// Throws InputError when a sequence appears on both sides.
    void validate() const;
};

/// Sliding windows of three. Throws InputError on a length mismatch, fewer
/// than three frames, or non-consecutive frame indices.
std::vector<TrainingTriple> make_triples(std::span<const DisparityMap> frames, std::span<const Pose> poses);

/// Number of pairs a triple expands to.
inline std::size_t pairs_per_triple(bool skip_ordering) { return skip_ordering ? 3 : 2; }

/// Gap-1 pairs, plus the gap-2 pair when skip-ordering is on.
std::vector<PairSample> expand_pairs(const TrainingTriple& triple, bool skip_ordering);

/// Targets of the three slots of kTriplePairs (all three are computed regardless of skip-ordering).
std::array<RelativeMotion, 3> triple_targets(const TrainingTriple& triple);

}  // namespace dispvo
