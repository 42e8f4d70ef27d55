#include "dispvo/loss.hpp"

#include <cmath>

#include "dispvo/errors.hpp"

namespace dispvo {

void LossConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("loss weight alpha must be positive");
}

LossBreakdown compute_loss(std::span<const TriplePredictions> predictions, std::span<const TripleTargets> targets,
                           const LossConfig& cfg, bool skip_ordering) {
    cfg.validate();
    if (predictions.size() != targets.size()) throw InputError("prediction and target batch sizes differ");
    LossBreakdown out;
    if (predictions.empty()) return out;

    std::array<double, 3> rot{0.0, 0.0, 0.0};
    std::array<double, 3> trans{0.0, 0.0, 0.0};
    const std::size_t terms = skip_ordering ? 3 : 2;
    for (std::size_t b = 0; b < predictions.size(); ++b) {
        for (std::size_t k = 0; k < terms; ++k) {
            rot[k] += (targets[b][k].euler.as_vector() - predictions[b][k].euler).squaredNorm();
            trans[k] += (targets[b][k].translation - predictions[b][k].translation).squaredNorm();
        }
    }
    const double n = static_cast<double>(predictions.size());
    out.l_rot_21 = rot[0] / n;
    out.l_rot_32 = rot[1] / n;
    out.l_rot_31 = rot[2] / n;
    out.l_trans_21 = trans[0] / n;
    out.l_trans_32 = trans[1] / n;
    out.l_trans_31 = trans[2] / n;
    out.total = cfg.alpha * out.rotation_sum() + out.translation_sum();
    return out;
}

LossBreakdown compute_loss(const TriplePredictions& predictions, const TripleTargets& targets, const LossConfig& cfg,
                           bool skip_ordering) {
    return compute_loss(std::span<const TriplePredictions>(&predictions, 1), std::span<const TripleTargets>(&targets, 1),
                        cfg, skip_ordering);
}

std::vector<TripleGradients> loss_gradient(std::span<const TriplePredictions> predictions,
                                           std::span<const TripleTargets> targets, const LossConfig& cfg,
                                           bool skip_ordering) {
    cfg.validate();
    if (predictions.size() != targets.size()) throw InputError("prediction and target batch sizes differ");
    std::vector<TripleGradients> grads(predictions.size());
    const std::size_t terms = skip_ordering ? 3 : 2;
    const double n = static_cast<double>(predictions.size());
    for (std::size_t b = 0; b < predictions.size(); ++b) {
        for (std::size_t k = 0; k < terms; ++k) {
            grads[b][k].euler = (cfg.alpha * 2.0 / n) * (predictions[b][k].euler - targets[b][k].euler.as_vector());
            grads[b][k].translation = (2.0 / n) * (predictions[b][k].translation - targets[b][k].translation);
        }
    }
    return grads;
}

}  // namespace dispvo
