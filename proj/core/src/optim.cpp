#include "dispvo/optim.hpp"

#include <cmath>
#include <string>

#include "dispvo/errors.hpp"

namespace dispvo {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr,
               const AdamConfig& cfg) {
    if (grads.size() != params.size() || state.m.size() != params.size() || state.v.size() != params.size()) {
        throw InputError("Adam moments, gradients and parameters must have the same length");
    }
    ++state.step;
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grads[i];
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
        const double m_hat = state.m[i] / c1;
        const double v_hat = state.v[i] / c2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
}

double lr_schedule(int epoch, double base_lr) {
    if (epoch < 0 || epoch >= kScheduleEpochs) {
        throw ConfigError("epoch " + std::to_string(epoch) + " is outside the 30-epoch schedule");
    }
    return std::ldexp(base_lr, -(epoch / kHalvingPeriod));
}

}  // namespace dispvo
