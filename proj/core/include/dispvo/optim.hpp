#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dispvo {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t step = 0;

    static AdamState zeros(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0}; }
};

/// One bias-corrected Adam update in place.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr,
               const AdamConfig& cfg = {});

inline constexpr double kBaseLearningRate = 1e-5;
inline constexpr int kScheduleEpochs = 30;
inline constexpr int kHalvingPeriod = 5;

/// base_lr * 0.5^floor(epoch / 5) for epoch in [0, 30); ConfigError otherwise.
double lr_schedule(int epoch, double base_lr = kBaseLearningRate);

}  // namespace dispvo
