#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uab/analysis.hpp"
#include "uab/dataset.hpp"
#include "uab/ensemble.hpp"
#include "uab/serialize.hpp"
#include "uab/train.hpp"

namespace uab {

// Everything a run needs; the CLI is a thin flag parser over this. Artifacts
// embed the canonical echo of their RunConfig so any output can be
// reproduced byte-for-byte from its own stamp.
struct RunConfig {
    std::string command;

    // data source (exactly one for data-consuming commands)
    std::optional<std::filesystem::path> data_file;  // dataset bundle
    std::optional<std::filesystem::path> data_dir;   // transcripts/ + acoustic.csv + labels.csv

    SyntheticSpec synth;                             // synth command
    std::optional<std::filesystem::path> bundle;     // evaluate command

    BoostMode mode = BoostMode::ua;
    FusionRule fusion = FusionRule::inverse_sigma;
    std::vector<Modality> order;                     // default set in normalize()
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
    std::filesystem::path out_dir = ".";
    TrainConfig train_config;
    SplitSpec split;                                 // seed field derived per run seed
    bool cumulative_weights = false;
    int jobs = 1;

    // Fills defaults and validates (order permutation, non-empty seeds...).
    void normalize();
};

std::string config_echo(const RunConfig& cfg);

// Loads from --data, --data-dir, or the synth spec, whichever is set.
RawDataset load_input_data(const RunConfig& cfg);

// Per-evaluation-seed artifacts of the comparison protocol: three standalone
// learners, a vanilla-boosted and an ua-boosted ensemble, all sharing one
// split and one base seed.
struct SeedArtifacts {
    std::uint64_t seed = 0;
    PreparedSplits splits;
    std::vector<TrainResult> individual;  // aligned with kAllModalities
    BoostedEnsemble vanilla;
    BoostedEnsemble ua;
    std::array<double, 3> individual_rmse{};  // aligned with kAllModalities
    double vanilla_rmse = 0.0;
    double ua_rmse = 0.0;
    double ua_weighted_rmse = 0.0;
};

SeedArtifacts run_protocol_seed(const RawDataset& raw, const RunConfig& cfg, std::uint64_t seed,
                                bool train_individual = true);

struct CompareOutcome {
    std::vector<MethodResult> rows;  // 6: three individual, vanilla, ua, ua_weighted
    std::vector<SeedArtifacts> per_seed;
    EntropyReport vanilla_entropy;  // first seed, test split
    EntropyReport ua_entropy;
};

// --- commands ---

// Writes <out>/dataset.uds.
std::filesystem::path run_synth(const RunConfig& cfg);
std::filesystem::path run_extract(const RunConfig& cfg);

// Trains one ensemble at seeds[0]; writes <out>/ensemble/.
std::filesystem::path run_train(const RunConfig& cfg);

// Loads an ensemble bundle, rebuilds its split on the given data, returns
// the fused test RMSE (also printed by the CLI).
struct EvaluateOutcome {
    double test_rmse = 0.0;
    std::vector<std::pair<Modality, double>> per_learner_rmse;
};
EvaluateOutcome run_evaluate(const RunConfig& cfg);

// Full comparison protocol over all seeds; writes <out>/results.csv and
// <out>/entropy.svg.
CompareOutcome run_compare(const RunConfig& cfg, bool write_artifacts = true);

// Entropy study only; writes <out>/entropy.svg.
void run_entropy(const RunConfig& cfg);

}  // namespace uab
