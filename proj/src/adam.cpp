#include "vitalcast/adam.hpp"

#include <cmath>
#include <string>

#include "vitalcast/errors.hpp"

namespace vitalcast {

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double lr) {
    const std::size_t n = params.size();
    require(grads.size() == n, "adam_step: params and grads dimensions differ");
    require(state.m.size() == n && state.v.size() == n,
            "adam_step: optimizer state dimension differs from params");
    require(lr > 0.0, "adam_step: lr must be positive");

    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(grads[i])) {
            throw Error("adam_step: non-finite gradient at index " + std::to_string(i));
        }
    }

    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < n; ++i) {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
}

}  // namespace vitalcast
