#include "uab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uab/errors.hpp"
#include "uab/rng.hpp"

namespace uab {

namespace {
constexpr double kWeightFloor = 1e-3;
// sub-seed streams for stage k: network init and shuffle order
constexpr std::uint64_t kInitStream = 0x100;
constexpr std::uint64_t kShuffleStream = 0x200;
}  // namespace

std::string to_string(BoostMode m) { return m == BoostMode::vanilla ? "vanilla" : "ua"; }

std::string to_string(FusionRule r) { return r == FusionRule::mean ? "mean" : "inverse_sigma"; }

BoostMode boost_mode_from_string(const std::string& name) {
    if (name == "vanilla") return BoostMode::vanilla;
    if (name == "ua") return BoostMode::ua;
    throw ConfigError("unknown boost mode '" + name + "' (expected vanilla|ua)");
}

FusionRule fusion_rule_from_string(const std::string& name) {
    if (name == "mean") return FusionRule::mean;
    if (name == "inverse_sigma" || name == "inverse-sigma") return FusionRule::inverse_sigma;
    throw ConfigError("unknown fusion rule '" + name + "' (expected mean|inverse-sigma)");
}

std::vector<double> compute_boost_weights(const std::vector<GaussianPrediction>& preds,
                                          const std::vector<double>& targets, BoostMode mode) {
    if (preds.empty()) throw std::invalid_argument("compute_boost_weights: empty prediction list");
    if (preds.size() != targets.size())
        throw std::invalid_argument("compute_boost_weights: predictions/targets length mismatch");

    std::vector<double> weights(preds.size(), 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double raw = mode == BoostMode::ua ? preds[i].sigma
                                                 : std::fabs(targets[i] - preds[i].mu);
        weights[i] = std::max(raw, kWeightFloor);
        sum += weights[i];
    }
    const double inv_mean = static_cast<double>(preds.size()) / sum;
    for (double& w : weights) w *= inv_mean;
    return weights;
}

double fuse(const std::vector<GaussianPrediction>& preds, FusionRule rule) {
    if (preds.empty()) throw std::invalid_argument("fuse: empty prediction list");

    double lo = preds.front().mu, hi = preds.front().mu;
    for (const GaussianPrediction& p : preds) {
        lo = std::min(lo, p.mu);
        hi = std::max(hi, p.mu);
    }

    bool equal_sigmas = true;
    for (const GaussianPrediction& p : preds) {
        if (!(p.sigma > 0.0)) throw std::domain_error("fuse: sigma must be positive");
        if (p.sigma != preds.front().sigma) equal_sigmas = false;
    }

    double fused = 0.0;
    if (rule == FusionRule::mean || equal_sigmas) {
        for (const GaussianPrediction& p : preds) fused += p.mu;
        fused /= static_cast<double>(preds.size());
    } else {
        double num = 0.0, den = 0.0;
        for (const GaussianPrediction& p : preds) {
            num += p.mu / p.sigma;
            den += 1.0 / p.sigma;
        }
        fused = num / den;
    }
    return std::clamp(fused, lo, hi);
}

BoostedEnsemble train_ensemble(const Dataset& train_split, const Dataset& val_split,
                               const std::vector<LearnerSpec>& specs,
                               const EnsembleTrainOptions& opts, const TrainConfig& tc) {
    if (specs.empty()) throw ConfigError("train_ensemble: no learner specs");

    BoostedEnsemble ens;
    ens.mode = opts.mode;
    ens.fusion = opts.fusion;

    std::vector<double> weights(train_split.size(), 1.0);
    for (std::size_t stage = 0; stage < specs.size(); ++stage) {
        const LearnerSpec& spec = specs[stage];
        NetworkConfig cfg = spec.config;
        cfg.seed = Rng::mix(tc.seed, kInitStream + stage);
        TrainConfig stage_tc = tc;
        stage_tc.seed = Rng::mix(tc.seed, kShuffleStream + stage);

        const ModalityData train_data = train_split.modality_data(spec.modality);
        const ModalityData val_data = val_split.modality_data(spec.modality);
        TrainResult result = train(cfg, train_data, val_data, weights, stage_tc);
        ens.boost_weight_history.push_back(weights);

        if (stage + 1 < specs.size()) {
            std::vector<GaussianPrediction> preds;
            preds.reserve(train_data.size());
            for (const Input& input : train_data.inputs)
                preds.push_back(result.net.predict(input));
            std::vector<double> next =
                compute_boost_weights(preds, train_data.targets, opts.mode);
            if (opts.cumulative_weights) {
                double sum = 0.0;
                for (std::size_t i = 0; i < next.size(); ++i) {
                    next[i] = std::max(next[i] * weights[i], kWeightFloor);
                    sum += next[i];
                }
                const double inv_mean = static_cast<double>(next.size()) / sum;
                for (double& w : next) w *= inv_mean;
            }
            weights = std::move(next);
        }

        ens.learners.push_back({spec.modality, std::move(result.net), std::move(result.log)});
    }
    return ens;
}

EnsemblePrediction predict_ensemble(const BoostedEnsemble& ens,
                                    const std::vector<std::pair<Modality, Input>>& inputs) {
    if (ens.learners.empty()) throw std::invalid_argument("predict_ensemble: empty ensemble");
    EnsemblePrediction out;
    out.per_learner.reserve(ens.learners.size());
    for (const EnsembleLearner& learner : ens.learners) {
        const Input* input = nullptr;
        for (const auto& [m, in] : inputs)
            if (m == learner.modality) {
                input = &in;
                break;
            }
        if (input == nullptr)
            throw std::invalid_argument("predict_ensemble: missing input for modality '" +
                                        to_string(learner.modality) + "'");
        out.per_learner.push_back(learner.net.predict(*input));
    }
    out.fused = fuse(out.per_learner, ens.fusion);
    return out;
}

EnsemblePrediction predict_ensemble(const BoostedEnsemble& ens, const Dataset& data,
                                    std::size_t index) {
    std::vector<std::pair<Modality, Input>> inputs;
    inputs.reserve(kAllModalities.size());
    for (Modality m : kAllModalities) inputs.emplace_back(m, data.input_for(m, index));
    return predict_ensemble(ens, inputs);
}

std::vector<double> predict_ensemble_fused(const BoostedEnsemble& ens, const Dataset& data) {
    std::vector<double> fused(data.size(), 0.0);
    std::vector<GaussianPrediction> preds(ens.learners.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t l = 0; l < ens.learners.size(); ++l)
            preds[l] = ens.learners[l].net.predict(
                data.input_for(ens.learners[l].modality, i));
        fused[i] = fuse(preds, ens.fusion);
    }
    return fused;
}

}  // namespace uab
