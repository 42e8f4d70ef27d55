#include <benchmark/benchmark.h>

#include "dispvo/dispvo.hpp"

namespace {

using namespace dispvo;

std::vector<TripleSample> samples_at(int height, int width) {
    SynthConfig cfg;
    cfg.height = height;
    cfg.width = width;
    cfg.frames = 3;
    const auto seq = generate_synthetic_sequence(cfg, 1);
    return make_samples(make_triples(seq.frames, seq.poses));
}

void BM_Forward(benchmark::State& state) {
    const int h = static_cast<int>(state.range(0)), w = 3 * h;
    ArchConfig arch;
    arch.height = h;
    arch.width = w;
    arch.zero_output_layers = false;
    const Network net(arch, 1);
    const auto s = samples_at(h, w);
    for (auto _ : state) benchmark::DoNotOptimize(net.forward(s[0].frames[0], s[0].frames[1]));
}
BENCHMARK(BM_Forward)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

// One training step: three pairs forward and backward.
void BM_TripleGradient(benchmark::State& state) {
    const int h = static_cast<int>(state.range(0)), w = 3 * h;
    ArchConfig arch;
    arch.height = h;
    arch.width = w;
    arch.zero_output_layers = false;
    const Network net(arch, 1);
    const auto s = samples_at(h, w);
    for (auto _ : state) benchmark::DoNotOptimize(compute_gradients(net, s, LossConfig{}, true));
}
BENCHMARK(BM_TripleGradient)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_RenderDisparity(benchmark::State& state) {
    SynthConfig cfg;
    cfg.frames = 2;
    const auto seq = generate_synthetic_sequence(cfg, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(render_disparity(seq.boxes, cfg, seq.poses[1], seq.intrinsics, 1));
    }
}
BENCHMARK(BM_RenderDisparity)->Unit(benchmark::kMillisecond);

std::vector<RelativeMotion> wiggly_motions(std::size_t n) {
    std::vector<RelativeMotion> m;
    for (std::size_t k = 0; k < n; ++k) {
        m.push_back(RelativeMotion::from_euler({0.0, 0.01 * std::sin(0.05 * static_cast<double>(k)), 0.0}, Vec3(0, 0, 1)));
    }
    return m;
}

void BM_IntegrateTrajectory(benchmark::State& state) {
    const auto motions = wiggly_motions(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(integrate_trajectory(motions));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegrateTrajectory)->Arg(1000)->Arg(5000);

void BM_EvaluateSequence(benchmark::State& state) {
    const auto gt = integrate_trajectory(wiggly_motions(static_cast<std::size_t>(state.range(0))));
    auto drift = wiggly_motions(static_cast<std::size_t>(state.range(0)));
    for (auto& m : drift) m.translation *= 1.05;
    const auto pred = integrate_trajectory(drift);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_sequence(gt, pred));
}
BENCHMARK(BM_EvaluateSequence)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
