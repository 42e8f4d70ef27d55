#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dispvo/dataset.hpp"
#include "dispvo/loss.hpp"
#include "dispvo/network.hpp"
#include "dispvo/optim.hpp"

namespace dispvo {

/// A training triple converted to network input tensors and pair targets.
struct TripleSample {
    std::array<Tensor, 3> frames;
    TripleTargets targets;
};

TripleSample make_sample(const TrainingTriple& triple);
std::vector<TripleSample> make_samples(std::span<const TrainingTriple> triples);

struct TrainConfig {
    ArchConfig arch;
    LossConfig loss;
    AdamConfig adam;
    bool skip_ordering = true;
    int epochs = kScheduleEpochs;
    /// Passes over the dataset inside one schedule epoch.
    int repeats_per_epoch = 1;
    double base_lr = kBaseLearningRate;
    std::uint64_t seed = 0;
    bool shuffle = true;
    /// Re-evaluate the full-dataset loss after every epoch.
    bool track_held_in = false;

    /// Throws ConfigError on out-of-schedule epochs or bad hyperparameters.
    void validate() const;
};

struct StepRecord {
    int epoch = 0;
    int step = 0;
    double lr = 0.0;
    LossBreakdown loss;
};

struct TrainResult {
    Network network;
    std::vector<StepRecord> history;
    std::vector<double> epoch_mean_loss;
    /// Full-dataset loss after each epoch (only when track_held_in).
    std::vector<double> held_in_loss;
};

struct GradientResult {
    LossBreakdown loss;
    std::vector<double> gradients;
};

/// Forward + reverse pass of the loss over a batch of triples.
GradientResult compute_gradients(const Network& net, std::span<const TripleSample> batch, const LossConfig& cfg,
                                 bool skip_ordering);

/// Mean loss over `samples` evaluated one triple at a time.
double mean_loss(const Network& net, std::span<const TripleSample> samples, const LossConfig& cfg, bool skip_ordering);

/// Per-step observer; called after each Adam update.
using StepObserver = std::function<void(const StepRecord&)>;

/// One triple per Adam step, learning rate from lr_schedule. Throws InputError on an empty dataset.
TrainResult train(std::span<const TripleSample> dataset, const TrainConfig& cfg, const StepObserver& observer = {});
TrainResult train(std::span<const TrainingTriple> dataset, const TrainConfig& cfg, const StepObserver& observer = {});

/// Motions between consecutive frames. Throws InputError with fewer than two frames.
std::vector<RelativeMotion> predict_sequence(const Network& net, std::span<const DisparityMap> frames);

}  // namespace dispvo
