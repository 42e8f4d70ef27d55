#pragma once

#include <array>
#include <span>

#include "dispvo/network.hpp"
#include "dispvo/pose.hpp"

namespace dispvo {

struct LossConfig {
    double alpha = 350.0;  // weight on the rotation terms

    /// Throws ConfigError unless alpha is finite and positive.
    void validate() const;
};

/// Per-term mean squared errors of one (mini-)batch of triples.
/// Suffixes name the pair: 21 = (t, t+1), 32 = (t+1, t+2), 31 = (t, t+2).
struct LossBreakdown {
    double l_rot_21 = 0.0;
    double l_rot_32 = 0.0;
    double l_rot_31 = 0.0;
    double l_trans_21 = 0.0;
    double l_trans_32 = 0.0;
    double l_trans_31 = 0.0;
    double total = 0.0;

    double rotation_sum() const { return l_rot_21 + l_rot_32 + l_rot_31; }
    double translation_sum() const { return l_trans_21 + l_trans_32 + l_trans_31; }
};

/// Predictions / targets in kTriplePairs order. The third slot is ignored
/// when skip-ordering is off.
using TriplePredictions = std::array<Prediction, 3>;
using TripleTargets = std::array<RelativeMotion, 3>;
using TripleGradients = std::array<PredictionGrad, 3>;

/// total = alpha * (L^R_21 + L^R_32 + L^R_31) + (L^T_21 + L^T_32 + L^T_31), where
/// each term is the batch mean of ||gt - output||^2 (Euler triples for rotation).
LossBreakdown compute_loss(std::span<const TriplePredictions> predictions, std::span<const TripleTargets> targets,
                           const LossConfig& cfg, bool skip_ordering);

/// Single-triple convenience overload.
LossBreakdown compute_loss(const TriplePredictions& predictions, const TripleTargets& targets, const LossConfig& cfg,
                           bool skip_ordering);

/// dtotal/dprediction for every pair of every triple.
std::vector<TripleGradients> loss_gradient(std::span<const TriplePredictions> predictions,
                                           std::span<const TripleTargets> targets, const LossConfig& cfg,
                                           bool skip_ordering);

}  // namespace dispvo
