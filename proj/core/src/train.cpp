#include "dispvo/train.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "dispvo/errors.hpp"

namespace dispvo {

TripleSample make_sample(const TrainingTriple& triple) {
    TripleSample s;
    for (std::size_t k = 0; k < 3; ++k) s.frames[k] = to_tensor(triple.frames[k]);
    s.targets = triple_targets(triple);
    return s;
}

std::vector<TripleSample> make_samples(std::span<const TrainingTriple> triples) {
    std::vector<TripleSample> out;
    out.reserve(triples.size());
    for (const auto& t : triples) out.push_back(make_sample(t));
    return out;
}

void TrainConfig::validate() const {
    arch.validate();
    loss.validate();
    if (epochs < 1 || epochs > kScheduleEpochs) {
        throw ConfigError("epochs must be in [1, 30]; the learning-rate schedule ends at epoch 30");
    }
    if (repeats_per_epoch < 1) throw ConfigError("repeats_per_epoch must be at least 1");
    if (!(base_lr > 0.0)) throw ConfigError("base learning rate must be positive");
}

GradientResult compute_gradients(const Network& net, std::span<const TripleSample> batch, const LossConfig& cfg,
                                 bool skip_ordering) {
    const std::size_t terms = pairs_per_triple(skip_ordering);
    std::vector<std::array<PairTrace, 3>> traces(batch.size());
    std::vector<TriplePredictions> preds(batch.size());
    std::vector<TripleTargets> targets(batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) {
        for (std::size_t k = 0; k < terms; ++k) {
            const auto [i, j] = kTriplePairs[k];
            traces[b][k] = net.forward_traced(batch[b].frames[static_cast<std::size_t>(i)],
                                              batch[b].frames[static_cast<std::size_t>(j)]);
            preds[b][k] = traces[b][k].prediction;
        }
        targets[b] = batch[b].targets;
    }
    GradientResult r;
    r.loss = compute_loss(preds, targets, cfg, skip_ordering);
    const auto dpred = loss_gradient(preds, targets, cfg, skip_ordering);
    r.gradients.assign(net.parameter_count(), 0.0);
    for (std::size_t b = 0; b < batch.size(); ++b) {
        for (std::size_t k = 0; k < terms; ++k) net.backward(traces[b][k], dpred[b][k], r.gradients);
    }
    return r;
}

double mean_loss(const Network& net, std::span<const TripleSample> samples, const LossConfig& cfg, bool skip_ordering) {
    if (samples.empty()) return 0.0;
    const std::size_t terms = pairs_per_triple(skip_ordering);
    double sum = 0.0;
    for (const auto& s : samples) {
        TriplePredictions p;
        for (std::size_t k = 0; k < terms; ++k) {
            const auto [i, j] = kTriplePairs[k];
            p[k] = net.forward(s.frames[static_cast<std::size_t>(i)], s.frames[static_cast<std::size_t>(j)]);
        }
        sum += compute_loss(p, s.targets, cfg, skip_ordering).total;
    }
    return sum / static_cast<double>(samples.size());
}

TrainResult train(std::span<const TripleSample> dataset, const TrainConfig& cfg, const StepObserver& observer) {
    cfg.validate();
    if (dataset.empty()) throw InputError("training dataset is empty");

    TrainResult result{Network(cfg.arch, cfg.seed), {}, {}, {}};
    Network& net = result.network;
    AdamState adam = AdamState::zeros(net.parameter_count());
    std::mt19937_64 order_rng(cfg.seed ^ 0x9E3779B97F4A7C15ull);

    std::vector<std::size_t> order(dataset.size());
    int step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr = lr_schedule(epoch, cfg.base_lr);
        double epoch_sum = 0.0;
        int epoch_steps = 0;
        for (int rep = 0; rep < cfg.repeats_per_epoch; ++rep) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            if (cfg.shuffle) {
                // Fisher-Yates on raw draws keeps the order independent of the
                // standard library's distribution implementations.
                for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[order_rng() % i]);
            }
            for (std::size_t idx : order) {
                GradientResult g = compute_gradients(net, dataset.subspan(idx, 1), cfg.loss, cfg.skip_ordering);
                adam_step(net.parameters(), g.gradients, adam, lr, cfg.adam);
                StepRecord rec{epoch, step++, lr, g.loss};
                epoch_sum += g.loss.total;
                ++epoch_steps;
                if (observer) observer(rec);
                result.history.push_back(rec);
            }
        }
        result.epoch_mean_loss.push_back(epoch_sum / epoch_steps);
        if (cfg.track_held_in) result.held_in_loss.push_back(mean_loss(net, dataset, cfg.loss, cfg.skip_ordering));
    }
    return result;
}

TrainResult train(std::span<const TrainingTriple> dataset, const TrainConfig& cfg, const StepObserver& observer) {
    const auto samples = make_samples(dataset);
    return train(std::span<const TripleSample>(samples), cfg, observer);
}

std::vector<RelativeMotion> predict_sequence(const Network& net, std::span<const DisparityMap> frames) {
    if (frames.size() < 2) throw InputError("prediction needs at least two frames");
    std::vector<RelativeMotion> motions;
    motions.reserve(frames.size() - 1);
    Tensor prev = to_tensor(frames[0]);
    for (std::size_t k = 1; k < frames.size(); ++k) {
        Tensor next = to_tensor(frames[k]);
        const Prediction p = net.forward(prev, next);
        motions.push_back(RelativeMotion::from_euler(EulerAngles::from_vector(p.euler), p.translation));
        prev = std::move(next);
    }
    return motions;
}

}  // namespace dispvo
