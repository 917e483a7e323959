#include "uab/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "uab/rng.hpp"

namespace uab {

namespace {

double relu(double x) { return x > 0.0 ? x : 0.0; }

void glorot_fill(std::span<double> weights, int fan_in, int fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& w : weights) w = rng.uniform(-limit, limit);
}

}  // namespace

GaussianPrediction head_to_prediction(double raw_mu, double raw_sigma) {
    const double var = softplus(raw_sigma) + kVarianceFloor;
    return {raw_mu, std::sqrt(var)};
}

Network::Network(const NetworkConfig& config) : config_(config) {
    if (config_.layer_sizes.empty())
        throw std::invalid_argument("Network: layer_sizes must not be empty");
    for (int s : config_.layer_sizes)
        if (s < 1) throw std::invalid_argument("Network: layer sizes must be >= 1");

    std::size_t offset = 0;
    auto add_dense = [&](int in, int out, Activation act) {
        DenseShape d{in, out, offset, offset + static_cast<std::size_t>(in) * out, act};
        offset = d.b_off + static_cast<std::size_t>(out);
        dense_.push_back(d);
    };

    if (config_.kind == NetworkKind::feedforward) {
        if (config_.seq_len != 1)
            throw std::invalid_argument("Network: feedforward nets use seq_len == 1");
        for (std::size_t l = 1; l < config_.layer_sizes.size(); ++l)
            add_dense(config_.layer_sizes[l - 1], config_.layer_sizes[l], Activation::relu);
        add_dense(config_.layer_sizes.back(), 2, Activation::identity);
    } else {
        if (config_.layer_sizes.size() != 2)
            throw std::invalid_argument("Network: recurrent nets need layer_sizes {step_dim, hidden}");
        if (config_.seq_len < 1)
            throw std::invalid_argument("Network: recurrent nets need seq_len >= 1");
        const int in = config_.layer_sizes[0];
        const int hidden = config_.layer_sizes[1];
        rec_win_off_ = offset;
        offset += static_cast<std::size_t>(hidden) * in;
        rec_wrec_off_ = offset;
        offset += static_cast<std::size_t>(hidden) * hidden;
        rec_b_off_ = offset;
        offset += static_cast<std::size_t>(hidden);
        add_dense(hidden, 2, Activation::identity);
    }

    params_.assign(offset, 0.0);

    Rng rng(config_.seed);
    if (config_.kind == NetworkKind::recurrent) {
        const int in = config_.layer_sizes[0];
        const int hidden = config_.layer_sizes[1];
        glorot_fill({params_.data() + rec_win_off_, static_cast<std::size_t>(hidden) * in},
                    in, hidden, rng);
        glorot_fill({params_.data() + rec_wrec_off_, static_cast<std::size_t>(hidden) * hidden},
                    hidden, hidden, rng);
    }
    for (const DenseShape& d : dense_)
        glorot_fill({params_.data() + d.w_off, static_cast<std::size_t>(d.in) * d.out},
                    d.in, d.out, rng);
}

void Network::check_input(const Input& input) const {
    if (config_.kind == NetworkKind::feedforward) {
        const int expected = config_.layer_sizes.front();
        if (input.steps != 1 || static_cast<int>(input.values.size()) != expected)
            throw std::invalid_argument(
                "Network: input dimension mismatch, expected flat vector of " +
                std::to_string(expected) + ", got " + std::to_string(input.values.size()) +
                " values in " + std::to_string(input.steps) + " step(s)");
    } else {
        const int dim = config_.layer_sizes.front();
        if (input.steps != config_.seq_len || input.step_dim() != dim ||
            static_cast<int>(input.values.size()) != config_.seq_len * dim)
            throw std::invalid_argument(
                "Network: input sequence mismatch, expected " + std::to_string(config_.seq_len) +
                " steps of " + std::to_string(dim) + " values, got " +
                std::to_string(input.steps) + " steps of " + std::to_string(input.step_dim()));
    }
}

std::pair<double, double> Network::forward(const Input& input,
                                           std::vector<std::vector<double>>& cache) const {
    cache.clear();
    if (config_.kind == NetworkKind::feedforward) {
        cache.push_back(input.values);
        // hidden relu layers, then the two-unit identity head
        for (const DenseShape& d : dense_) {
            const std::vector<double>& prev = cache.back();
            std::vector<double> next(static_cast<std::size_t>(d.out), 0.0);
            for (int o = 0; o < d.out; ++o) {
                double z = params_[d.b_off + o];
                const double* w = params_.data() + d.w_off + static_cast<std::size_t>(o) * d.in;
                for (int i = 0; i < d.in; ++i) z += w[i] * prev[i];
                next[o] = d.act == Activation::relu ? relu(z) : z;
            }
            cache.push_back(std::move(next));
        }
    } else {
        const int in = config_.layer_sizes[0];
        const int hidden = config_.layer_sizes[1];
        // cache[t] is the hidden state after step t; cache[0] the zero state
        cache.push_back(std::vector<double>(static_cast<std::size_t>(hidden), 0.0));
        for (int t = 0; t < config_.seq_len; ++t) {
            const std::vector<double>& prev = cache.back();
            const double* x = input.values.data() + static_cast<std::size_t>(t) * in;
            std::vector<double> h(static_cast<std::size_t>(hidden), 0.0);
            for (int j = 0; j < hidden; ++j) {
                double a = params_[rec_b_off_ + j];
                const double* win = params_.data() + rec_win_off_ + static_cast<std::size_t>(j) * in;
                for (int i = 0; i < in; ++i) a += win[i] * x[i];
                const double* wrec =
                    params_.data() + rec_wrec_off_ + static_cast<std::size_t>(j) * hidden;
                for (int i = 0; i < hidden; ++i) a += wrec[i] * prev[i];
                h[j] = std::tanh(a);
            }
            cache.push_back(std::move(h));
        }
        const DenseShape& head = dense_.back();
        const std::vector<double>& last = cache.back();
        std::vector<double> out(2, 0.0);
        for (int o = 0; o < 2; ++o) {
            double z = params_[head.b_off + o];
            const double* w = params_.data() + head.w_off + static_cast<std::size_t>(o) * head.in;
            for (int i = 0; i < head.in; ++i) z += w[i] * last[i];
            out[o] = z;
        }
        cache.push_back(std::move(out));
    }
    const std::vector<double>& head_out = cache.back();
    return {head_out[0], head_out[1]};
}

GaussianPrediction Network::predict(const Input& input) const {
    check_input(input);
    std::vector<std::vector<double>> cache;
    const auto [raw_mu, raw_sigma] = forward(input, cache);
    return head_to_prediction(raw_mu, raw_sigma);
}

void Network::accumulate_sample_gradient(const TrainSample& sample, double inv_batch,
                                         std::vector<std::vector<double>>& cache,
                                         std::vector<double>& grad, double& loss) const {
    check_input(sample.input);
    const auto [raw_mu, raw_sigma] = forward(sample.input, cache);
    const GaussianPrediction pred = head_to_prediction(raw_mu, raw_sigma);
    loss += inv_batch * weighted_nll(pred, sample.target, sample.weight);
    if (sample.weight == 0.0) return;

    const double scale = inv_batch * sample.weight;
    const double var = pred.sigma * pred.sigma;
    const double r = sample.target - pred.mu;
    // d nll / d mu and d nll / d var, chained through sigma^2 = softplus + floor
    const double d_mu = scale * (pred.mu - sample.target) / var;
    const double d_var = scale * (0.5 / var - r * r / (2.0 * var * var));
    const double d_raw_sigma = d_var * sigmoid(raw_sigma);

    std::vector<double> delta{d_mu, d_raw_sigma};

    if (config_.kind == NetworkKind::feedforward) {
        // cache holds h_0 = x, h_1..h_L, head output
        for (std::size_t li = dense_.size(); li-- > 0;) {
            const DenseShape& d = dense_[li];
            const std::vector<double>& prev = cache[li];
            std::vector<double> delta_prev(static_cast<std::size_t>(d.in), 0.0);
            for (int o = 0; o < d.out; ++o) {
                const double g = delta[o];
                grad[d.b_off + o] += g;
                double* gw = grad.data() + d.w_off + static_cast<std::size_t>(o) * d.in;
                const double* w = params_.data() + d.w_off + static_cast<std::size_t>(o) * d.in;
                for (int i = 0; i < d.in; ++i) {
                    gw[i] += g * prev[i];
                    delta_prev[i] += w[i] * g;
                }
            }
            if (li == 0) break;
            // previous layer is relu: post-activation h > 0 marks the pass-through units
            for (int i = 0; i < d.in; ++i)
                if (prev[i] <= 0.0) delta_prev[i] = 0.0;
            delta = std::move(delta_prev);
        }
    } else {
        const int in = config_.layer_sizes[0];
        const int hidden = config_.layer_sizes[1];
        const DenseShape& head = dense_.back();
        // cache: h_0 (zeros), h_1..h_T, head output
        const std::vector<double>& h_last = cache[cache.size() - 2];
        std::vector<double> dh(static_cast<std::size_t>(hidden), 0.0);
        for (int o = 0; o < 2; ++o) {
            const double g = delta[o];
            grad[head.b_off + o] += g;
            double* gw = grad.data() + head.w_off + static_cast<std::size_t>(o) * head.in;
            const double* w = params_.data() + head.w_off + static_cast<std::size_t>(o) * head.in;
            for (int i = 0; i < head.in; ++i) {
                gw[i] += g * h_last[i];
                dh[i] += w[i] * g;
            }
        }
        // backprop through time
        for (int t = config_.seq_len; t >= 1; --t) {
            const std::vector<double>& h_t = cache[t];
            const std::vector<double>& h_prev = cache[t - 1];
            const double* x = sample.input.values.data() + static_cast<std::size_t>(t - 1) * in;
            std::vector<double> dh_prev(static_cast<std::size_t>(hidden), 0.0);
            for (int j = 0; j < hidden; ++j) {
                const double da = dh[j] * (1.0 - h_t[j] * h_t[j]);
                grad[rec_b_off_ + j] += da;
                double* gwin = grad.data() + rec_win_off_ + static_cast<std::size_t>(j) * in;
                for (int i = 0; i < in; ++i) gwin[i] += da * x[i];
                double* gwrec = grad.data() + rec_wrec_off_ + static_cast<std::size_t>(j) * hidden;
                const double* wrec =
                    params_.data() + rec_wrec_off_ + static_cast<std::size_t>(j) * hidden;
                for (int i = 0; i < hidden; ++i) {
                    gwrec[i] += da * h_prev[i];
                    dh_prev[i] += wrec[i] * da;
                }
            }
            dh = std::move(dh_prev);
        }
    }
}

double Network::backward(std::span<const TrainSample> batch, std::vector<double>& grad) const {
    if (batch.empty()) throw std::invalid_argument("Network::backward: empty batch");
    grad.assign(params_.size(), 0.0);
    const double inv_batch = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    std::vector<std::vector<double>> cache;
    for (const TrainSample& s : batch) accumulate_sample_gradient(s, inv_batch, cache, grad, loss);
    return loss;
}

double Network::backward(std::span<const TrainSample> samples,
                         std::span<const std::size_t> batch_indices,
                         std::vector<double>& grad) const {
    if (batch_indices.empty()) throw std::invalid_argument("Network::backward: empty batch");
    grad.assign(params_.size(), 0.0);
    const double inv_batch = 1.0 / static_cast<double>(batch_indices.size());
    double loss = 0.0;
    std::vector<std::vector<double>> cache;
    for (std::size_t idx : batch_indices)
        accumulate_sample_gradient(samples[idx], inv_batch, cache, grad, loss);
    return loss;
}

double Network::batch_nll(std::span<const TrainSample> batch) const {
    if (batch.empty()) throw std::invalid_argument("Network::batch_nll: empty batch");
    double loss = 0.0;
    std::vector<std::vector<double>> cache;
    for (const TrainSample& s : batch) {
        check_input(s.input);
        const auto [raw_mu, raw_sigma] = forward(s.input, cache);
        loss += weighted_nll(head_to_prediction(raw_mu, raw_sigma), s.target, s.weight);
    }
    return loss / static_cast<double>(batch.size());
}

}  // namespace uab
