#include "uab/train.hpp"

#include <cmath>
#include <numeric>

#include "uab/adam.hpp"
#include "uab/errors.hpp"
#include "uab/rng.hpp"

namespace uab {

namespace {
constexpr double kGradClipNorm = 5.0;
}

void clip_gradient(std::vector<double>& grad, double max_norm) {
    double sq = 0.0;
    for (double g : grad) sq += g * g;
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const double scale = max_norm / norm;
        for (double& g : grad) g *= scale;
    }
}

TrainResult train(const NetworkConfig& config, const ModalityData& train_set,
                  const ModalityData& val_set, const std::vector<double>& sample_weights,
                  const TrainConfig& tc) {
    const std::size_t n = train_set.size();
    if (n == 0) throw TrainError("train: empty training set");
    if (val_set.size() == 0) throw TrainError("train: empty validation set");
    if (train_set.inputs.size() != n)
        throw TrainError("train: inputs/targets length mismatch");
    if (sample_weights.size() != n)
        throw TrainError("train: sample_weights length must equal training set size");
    if (tc.batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (tc.max_epochs < 1) throw ConfigError("train: max_epochs must be >= 1");
    if (tc.patience < 1 || tc.patience > tc.max_epochs)
        throw ConfigError("train: patience must be in [1, max_epochs]");
    if (!(tc.learning_rate > 0.0)) throw ConfigError("train: learning_rate must be positive");

    double weight_sum = 0.0;
    for (double w : sample_weights) {
        if (w < 0.0) throw TrainError("train: sample weights must be non-negative");
        weight_sum += w;
    }
    if (weight_sum == 0.0) throw TrainError("train: all sample weights are zero");
    const double weight_scale = static_cast<double>(n) / weight_sum;  // normalize to mean 1

    std::vector<TrainSample> train_samples(n);
    for (std::size_t i = 0; i < n; ++i)
        train_samples[i] = {train_set.inputs[i], train_set.targets[i],
                            sample_weights[i] * weight_scale};
    std::vector<TrainSample> val_samples(val_set.size());
    for (std::size_t i = 0; i < val_set.size(); ++i)
        val_samples[i] = {val_set.inputs[i], val_set.targets[i], 1.0};

    Network net(config);
    {
        // Warm-start the Gaussian head at the weighted target moments. The
        // NLL surface rewards shrinking sigma long before mu is fit; starting
        // from the marginal fit skips that unstable phase.
        double target_mean = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            target_mean += train_samples[i].weight * train_samples[i].target;
        target_mean /= static_cast<double>(n);
        double target_var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = train_samples[i].target - target_mean;
            target_var += train_samples[i].weight * delta * delta;
        }
        target_var /= static_cast<double>(n);
        net.params()[net.head_bias_mu_index()] = target_mean;
        const double raw = std::max(target_var - kVarianceFloor, kVarianceFloor);
        // inverse softplus
        net.params()[net.head_bias_raw_sigma_index()] =
            raw > 30.0 ? raw : std::log(std::expm1(raw));
    }
    AdamState adam(net.param_count(), tc.learning_rate);
    Rng shuffle_rng(tc.seed);

    TrainLog log;
    double val_nll = net.batch_nll(val_samples);
    log.epochs.push_back({0, net.batch_nll(train_samples), val_nll});
    log.best_epoch = 0;
    log.best_val_nll = val_nll;
    std::vector<double> best_params = net.params();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> grad;
    int epochs_since_best = 0;

    for (int epoch = 1; epoch <= tc.max_epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += tc.batch_size) {
            const std::size_t count = std::min<std::size_t>(tc.batch_size, n - start);
            net.backward(train_samples, {order.data() + start, count}, grad);
            clip_gradient(grad, kGradClipNorm);
            adam_step(adam, net.params(), grad);
        }
        const double train_nll = net.batch_nll(train_samples);
        val_nll = net.batch_nll(val_samples);
        log.epochs.push_back({epoch, train_nll, val_nll});
        if (val_nll < log.best_val_nll) {
            log.best_val_nll = val_nll;
            log.best_epoch = epoch;
            best_params = net.params();
            epochs_since_best = 0;
        } else if (++epochs_since_best >= tc.patience) {
            break;
        }
    }

    net.params() = std::move(best_params);
    return {std::move(net), std::move(log)};
}

}  // namespace uab
