#include "dispvo/dataset.hpp"

#include <algorithm>

#include "dispvo/errors.hpp"

namespace dispvo {

SequenceSplit SequenceSplit::kitti_default() {
    return {{"00", "01", "02", "03", "04", "05", "06", "07"}, {"08", "09", "10"}};
}

void SequenceSplit::validate() const {
    for (const auto& id : train_ids) {
        if (std::find(test_ids.begin(), test_ids.end(), id) != test_ids.end()) {
            throw InputError("sequence " + id + " is in both the train and the test split");
        }
    }
}

std::vector<TrainingTriple> make_triples(std::span<const DisparityMap> frames, std::span<const Pose> poses) {
    if (frames.size() != poses.size()) throw InputError("frame and pose counts differ");
    if (frames.size() < 3) throw InputError("at least three frames are needed to form a triple");
    std::vector<TrainingTriple> triples;
    triples.reserve(frames.size() - 2);
    for (std::size_t t = 0; t + 2 < frames.size(); ++t) {
        TrainingTriple tr;
        for (std::size_t k = 0; k < 3; ++k) {
            tr.frames[k] = frames[t + k];
            tr.poses[k] = poses[t + k];
        }
        if (tr.frames[1].frame_index != tr.frames[0].frame_index + 1 ||
            tr.frames[2].frame_index != tr.frames[1].frame_index + 1) {
            throw InputError("frame indices must be consecutive (window starting at position " + std::to_string(t) +
                             ")");
        }
        triples.push_back(std::move(tr));
    }
    return triples;
}

std::array<RelativeMotion, 3> triple_targets(const TrainingTriple& triple) {
    std::array<RelativeMotion, 3> out;
    for (std::size_t k = 0; k < 3; ++k) {
        const auto [a, b] = kTriplePairs[k];
        out[k] = relative_pose(triple.poses[a], triple.poses[b]);
    }
    return out;
}

std::vector<PairSample> expand_pairs(const TrainingTriple& triple, bool skip_ordering) {
    std::vector<PairSample> pairs;
    const std::size_t n = pairs_per_triple(skip_ordering);
    pairs.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto [a, b] = kTriplePairs[k];
        pairs.push_back({triple.frames[a], triple.frames[b], b - a, relative_pose(triple.poses[a], triple.poses[b])});
    }
    return pairs;
}

}  // namespace dispvo
