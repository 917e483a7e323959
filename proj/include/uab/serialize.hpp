#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "uab/dataset.hpp"
#include "uab/ensemble.hpp"
#include "uab/network.hpp"
#include "uab/train.hpp"

namespace uab {

// Shortest decimal string that parses back to the identical double, so all
// textual formats round-trip bit-exactly.
std::string format_exact(double v);
double parse_exact(std::string_view s);

// Trained-model file (`uab-model 1`): config echo plus the flat parameter
// vector in declaration order, one value per line.
void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

// Dataset bundle (`uab-dataset 1`): self-describing text with ids, labels,
// all modalities, and optional generator ground truth.
void save_dataset_bundle(const RawDataset& data, const std::filesystem::path& path);
RawDataset load_dataset_bundle(const std::filesystem::path& path);

struct EnsembleManifest {
    int version = 1;
    BoostMode mode = BoostMode::ua;
    FusionRule fusion = FusionRule::mean;
    std::vector<Modality> order;
    std::uint64_t seed = 0;
    SplitSpec split;
    TrainConfig train_config;
    std::string config_echo;
};

struct SavedEnsemble {
    BoostedEnsemble ensemble;
    EnsembleManifest manifest;
};

// Ensemble bundle: a directory holding manifest.json plus one model file per
// learner, in stage order.
void save_ensemble(const BoostedEnsemble& ens, const EnsembleManifest& manifest,
                   const std::filesystem::path& dir);
SavedEnsemble load_ensemble(const std::filesystem::path& dir);

}  // namespace uab
