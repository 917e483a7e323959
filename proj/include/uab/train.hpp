#pragma once

#include <cstdint>
#include <vector>

#include "uab/network.hpp"

namespace uab {

struct TrainConfig {
    int batch_size = 32;
    double learning_rate = 0.00125;
    int max_epochs = 500;
    int patience = 50;
    std::uint64_t seed = 0;
};

struct EpochStats {
    int epoch = 0;
    double train_nll = 0.0;  // mean weighted NLL over the train split
    double val_nll = 0.0;    // mean unweighted NLL over the validation split
};

struct TrainLog {
    std::vector<EpochStats> epochs;  // entry 0 records the untrained network
    int best_epoch = 0;
    double best_val_nll = 0.0;
};

// Aligned inputs and targets for one modality.
struct ModalityData {
    std::vector<Input> inputs;
    std::vector<double> targets;

    std::size_t size() const { return targets.size(); }
};

struct TrainResult {
    Network net;
    TrainLog log;
};

// Minibatch Adam on the sample-weighted Gaussian NLL with seeded shuffling,
// early stopping on validation NLL, and restoration of the best snapshot.
// Sample weights are normalized to mean one before the first step, so a
// uniform rescaling of all weights leaves the trajectory unchanged.
// Gradients are clipped to global norm 5 before each update.
TrainResult train(const NetworkConfig& config, const ModalityData& train_set,
                  const ModalityData& val_set, const std::vector<double>& sample_weights,
                  const TrainConfig& tc);

// Global-norm gradient clip, in place.
void clip_gradient(std::vector<double>& grad, double max_norm);

}  // namespace uab
