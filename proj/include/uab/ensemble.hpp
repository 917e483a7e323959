#pragma once

#include <string>
#include <utility>
#include <vector>

#include "uab/dataset.hpp"
#include "uab/learners.hpp"
#include "uab/train.hpp"

namespace uab {

// How per-sample loss weights for the next stage are derived: from absolute
// errors (vanilla) or from predicted standard deviations (uncertainty-aware).
enum class BoostMode { vanilla, ua };

// How the per-learner means are combined: plain average or weighted by
// inverse predicted standard deviation.
enum class FusionRule { mean, inverse_sigma };

std::string to_string(BoostMode m);
std::string to_string(FusionRule r);
BoostMode boost_mode_from_string(const std::string& name);
FusionRule fusion_rule_from_string(const std::string& name);

// Raw weight per sample (sigma for ua, |error| for vanilla), floored at
// 1e-3, then normalized to mean one. Weights stay strictly positive so no
// sample is ever fully discarded.
std::vector<double> compute_boost_weights(const std::vector<GaussianPrediction>& preds,
                                          const std::vector<double>& targets, BoostMode mode);

// mean: arithmetic mean of the mus. inverse_sigma: sum(mu/sigma)/sum(1/sigma),
// collapsing exactly to the arithmetic mean when all sigmas are equal. The
// result is clamped into the convex hull of the input means.
double fuse(const std::vector<GaussianPrediction>& preds, FusionRule rule);

struct EnsembleLearner {
    Modality modality = Modality::disfluency;
    Network net;
    TrainLog log;
};

struct BoostedEnsemble {
    std::vector<EnsembleLearner> learners;  // training order
    BoostMode mode = BoostMode::ua;
    FusionRule fusion = FusionRule::mean;
    // Per-stage training weights (stage 0 is uniform); each has mean one.
    std::vector<std::vector<double>> boost_weight_history;
};

struct EnsembleTrainOptions {
    BoostMode mode = BoostMode::ua;
    FusionRule fusion = FusionRule::mean;
    // Chain the previous stages' weights multiplicatively instead of using
    // only the immediately preceding learner.
    bool cumulative_weights = false;
};

// Sequential boosting: stage one trains with uniform weights; stage k+1
// trains with weights computed from stage k's predictions on the training
// split. Stage seeds derive from tc.seed, so identical seeds give identical
// stage-one learners in both modes.
BoostedEnsemble train_ensemble(const Dataset& train, const Dataset& val,
                               const std::vector<LearnerSpec>& specs,
                               const EnsembleTrainOptions& opts, const TrainConfig& tc);

struct EnsemblePrediction {
    double fused = 0.0;
    std::vector<GaussianPrediction> per_learner;
};

// Inputs are matched to learners by modality tag; a learner whose modality
// is missing from the list raises an error.
EnsemblePrediction predict_ensemble(const BoostedEnsemble& ens,
                                    const std::vector<std::pair<Modality, Input>>& inputs);
EnsemblePrediction predict_ensemble(const BoostedEnsemble& ens, const Dataset& data,
                                    std::size_t index);
// Fused predictions over a whole dataset.
std::vector<double> predict_ensemble_fused(const BoostedEnsemble& ens, const Dataset& data);

}  // namespace uab
