#include <gtest/gtest.h>

#include "dispvo/errors.hpp"
#include "dispvo/synth.hpp"
#include "dispvo/train.hpp"

using namespace dispvo;

namespace {

std::vector<TripleSample> synthetic_samples(int frames, std::uint64_t seed) {
    SynthConfig cfg;
    cfg.height = 16;
    cfg.width = 48;
    cfg.frames = frames;
    const auto seq = generate_synthetic_sequence(cfg, seed);
    return make_samples(make_triples(seq.frames, seq.poses));
}

TrainConfig small_train(int epochs) {
    TrainConfig tc;
    tc.arch.height = 16;
    tc.arch.width = 48;
    tc.epochs = epochs;
    tc.base_lr = 1e-3;
    tc.seed = 7;
    return tc;
}

}  // namespace

TEST(TrainConfig, Validation) {
    TrainConfig tc;
    EXPECT_NO_THROW(tc.validate());
    tc.epochs = 31;
    EXPECT_THROW(tc.validate(), ConfigError);
    tc = TrainConfig{};
    tc.base_lr = 0.0;
    EXPECT_THROW(tc.validate(), ConfigError);
    tc = TrainConfig{};
    tc.repeats_per_epoch = 0;
    EXPECT_THROW(tc.validate(), ConfigError);
}

TEST(Train, EmptyDatasetIsAnError) {
    EXPECT_THROW(train(std::span<const TripleSample>{}, small_train(1)), InputError);
}

TEST(Train, OneStepPerTripleWithScheduledRate) {
    const auto samples = synthetic_samples(8, 1);
    TrainConfig tc = small_train(6);
    int calls = 0;
    const auto r = train(samples, tc, [&](const StepRecord&) { ++calls; });
    EXPECT_EQ(calls, 6 * 6);
    ASSERT_EQ(r.history.size(), 36u);
    EXPECT_EQ(r.history.front().lr, 1e-3);
    EXPECT_EQ(r.history.back().lr, 5e-4);
    EXPECT_EQ(r.epoch_mean_loss.size(), 6u);
    EXPECT_TRUE(r.held_in_loss.empty());
}

TEST(Train, FixedSeedIsReproducible) {
    const auto samples = synthetic_samples(8, 2);
    const auto a = train(samples, small_train(3));
    const auto b = train(samples, small_train(3));
    ASSERT_EQ(a.history.size(), b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) EXPECT_EQ(a.history[i].loss.total, b.history[i].loss.total);
    EXPECT_TRUE(std::equal(a.network.parameters().begin(), a.network.parameters().end(),
                           b.network.parameters().begin()));
}

TEST(Train, SkipOrderingChangesTheObjective) {
    const auto samples = synthetic_samples(6, 3);
    TrainConfig with = small_train(2), without = small_train(2);
    without.skip_ordering = false;
    const auto a = train(samples, with), b = train(samples, without);
    EXPECT_GT(a.history[1].loss.l_trans_31, 0.0);
    EXPECT_EQ(b.history[1].loss.l_trans_31, 0.0);
}

TEST(Train, OverfitsASingleTriple) {
    const auto samples = synthetic_samples(3, 4);
    TrainConfig tc = small_train(20);
    tc.repeats_per_epoch = 10;
    tc.base_lr = 3e-3;
    const Network init(tc.arch, tc.seed);
    const double before = mean_loss(init, samples, tc.loss, tc.skip_ordering);
    const auto r = train(samples, tc);
    const double after = mean_loss(r.network, samples, tc.loss, tc.skip_ordering);
    EXPECT_LT(after, 0.01 * before);
}

TEST(Train, HeldInLossTrackedPerEpoch) {
    const auto samples = synthetic_samples(7, 5);
    TrainConfig tc = small_train(4);
    tc.track_held_in = true;
    const auto r = train(samples, tc);
    ASSERT_EQ(r.held_in_loss.size(), 4u);
    EXPECT_LT(r.held_in_loss.back(), mean_loss(Network(tc.arch, tc.seed), samples, tc.loss, true));
}

TEST(Train, SamplesCarryAllThreeTargets) {
    SynthConfig cfg;
    cfg.height = 16;
    cfg.width = 48;
    cfg.frames = 3;
    const auto seq = generate_synthetic_sequence(cfg, 6);
    const auto triples = make_triples(seq.frames, seq.poses);
    const auto s = make_sample(triples[0]);
    EXPECT_LT((s.targets[0].translation - seq.motions[0].translation).norm(), 1e-12);
    EXPECT_LT((s.targets[1].translation - seq.motions[1].translation).norm(), 1e-12);
    EXPECT_LT((s.targets[2].translation - relative_pose(seq.poses[0], seq.poses[2]).translation).norm(), 1e-12);
    EXPECT_EQ(s.frames[1].data.size(), 16u * 48u);
}
