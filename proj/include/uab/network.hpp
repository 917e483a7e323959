#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uab/gaussian.hpp"

namespace uab {

enum class NetworkKind { feedforward, recurrent };
enum class Activation { relu, identity };

// One sample as a network sees it: a flat feature vector (steps == 1) or a
// step-major sequence of `steps` rows, each of values.size()/steps entries.
struct Input {
    std::vector<double> values;
    int steps = 1;

    int step_dim() const {
        return steps > 0 ? static_cast<int>(values.size()) / steps : 0;
    }
};

// Architecture description. Feedforward: layer_sizes = {input, hidden...};
// recurrent: layer_sizes = {step_dim, hidden_dim} with seq_len fixed time
// steps. Every network ends in a dense head emitting exactly two raw values
// (raw_mu, raw_sigma).
struct NetworkConfig {
    NetworkKind kind = NetworkKind::feedforward;
    std::vector<int> layer_sizes;
    int seq_len = 1;
    std::uint64_t seed = 0;
};

struct TrainSample {
    Input input;
    double target = 0.0;
    double weight = 1.0;
};

// Parameterized regressor with a Gaussian head:
//   mu = raw_mu,  sigma^2 = softplus(raw_sigma) + 1e-6.
// All parameters live in one flat vector (declaration order: per dense layer
// W row-major then b; recurrent cells store W_in, W_rec, b, then the head).
// Weights start Glorot-uniform from the config seed, biases at zero.
class Network {
  public:
    explicit Network(const NetworkConfig& config);

    const NetworkConfig& config() const { return config_; }
    std::size_t param_count() const { return params_.size(); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    // Flat-vector indices of the Gaussian head's bias parameters, used by
    // the trainer to warm-start the head at the target moments.
    std::size_t head_bias_mu_index() const { return dense_.back().b_off; }
    std::size_t head_bias_raw_sigma_index() const { return dense_.back().b_off + 1; }

    // Pure given fixed parameters; safe to call from many threads.
    GaussianPrediction predict(const Input& input) const;

    // Mean weighted NLL over the batch together with its gradient with
    // respect to every parameter (grad is resized and overwritten).
    double backward(std::span<const TrainSample> batch, std::vector<double>& grad) const;
    double backward(std::span<const TrainSample> samples, std::span<const std::size_t> batch_indices,
                    std::vector<double>& grad) const;

    // Loss only; shared by validation scoring and finite-difference checks.
    double batch_nll(std::span<const TrainSample> batch) const;

  private:
    struct DenseShape {
        int in = 0;
        int out = 0;
        std::size_t w_off = 0;
        std::size_t b_off = 0;
        Activation act = Activation::relu;
    };

    void check_input(const Input& input) const;
    // Runs the net on one input, filling the per-layer (or per-step)
    // activation cache; returns (raw_mu, raw_sigma).
    std::pair<double, double> forward(const Input& input,
                                      std::vector<std::vector<double>>& cache) const;
    void accumulate_sample_gradient(const TrainSample& sample, double inv_batch,
                                    std::vector<std::vector<double>>& cache,
                                    std::vector<double>& grad, double& loss) const;

    NetworkConfig config_;
    std::vector<DenseShape> dense_;  // feedforward path incl. head; recurrent: head only
    // recurrent cell offsets
    std::size_t rec_win_off_ = 0;
    std::size_t rec_wrec_off_ = 0;
    std::size_t rec_b_off_ = 0;
    std::vector<double> params_;
};

GaussianPrediction head_to_prediction(double raw_mu, double raw_sigma);

}  // namespace uab
