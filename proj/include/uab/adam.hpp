#pragma once

#include <cstddef>
#include <vector>

namespace uab {

struct AdamState {
    std::size_t step = 0;
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    double learning_rate = 0.00125;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    AdamState(std::size_t n_params, double lr)
        : first_moment(n_params, 0.0), second_moment(n_params, 0.0), learning_rate(lr) {}
};

// One bias-corrected Adam update, in place.
void adam_step(AdamState& state, std::vector<double>& params, const std::vector<double>& grad);

}  // namespace uab
