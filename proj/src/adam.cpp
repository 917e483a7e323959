#include "uab/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace uab {

void adam_step(AdamState& state, std::vector<double>& params, const std::vector<double>& grad) {
    const std::size_t n = params.size();
    if (grad.size() != n || state.first_moment.size() != n || state.second_moment.size() != n)
        throw std::invalid_argument("adam_step: parameter/gradient/moment shape mismatch");

    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(state.beta1, t);
    const double bc2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t i = 0; i < n; ++i) {
        double& m = state.first_moment[i];
        double& v = state.second_moment[i];
        m = state.beta1 * m + (1.0 - state.beta1) * grad[i];
        v = state.beta2 * v + (1.0 - state.beta2) * grad[i] * grad[i];
        const double m_hat = m / bc1;
        const double v_hat = v / bc2;
        params[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
}

}  // namespace uab
