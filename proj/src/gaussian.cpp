#include "uab/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace uab {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2*pi)/2
}

double softplus(double x) {
    return std::fmax(x, 0.0) + std::log1p(std::exp(-std::fabs(x)));
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double weighted_nll(const GaussianPrediction& pred, double target, double weight) {
    if (!(pred.sigma > 0.0))
        throw std::domain_error("weighted_nll: sigma must be positive");
    if (weight < 0.0)
        throw std::invalid_argument("weighted_nll: weight must be non-negative");
    if (weight == 0.0) return 0.0;
    const double var = pred.sigma * pred.sigma;
    const double r = target - pred.mu;
    return weight * (0.5 * std::log(var) + r * r / (2.0 * var) + kHalfLog2Pi);
}

}  // namespace uab
