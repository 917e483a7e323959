#pragma once

namespace uab {

// Predicted Gaussian for one sample, in label units (MMSE points).
struct GaussianPrediction {
    double mu = 0.0;
    double sigma = 1.0;
};

// Variance floor keeping the NLL away from its sigma -> 0 singularity.
inline constexpr double kVarianceFloor = 1e-6;

// ln(1 + e^x), stable for large |x|.
double softplus(double x);
double sigmoid(double x);

// weight * [ln(sigma^2)/2 + (target - mu)^2 / (2 sigma^2) + ln(2 pi)/2].
// The ln(2 pi)/2 term is kept so the value is the exact negative log density
// and comparable across tools. Exactly zero when weight is zero.
double weighted_nll(const GaussianPrediction& pred, double target, double weight);

}  // namespace uab
