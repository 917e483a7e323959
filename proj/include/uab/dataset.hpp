#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uab/features.hpp"
#include "uab/linalg.hpp"
#include "uab/pca.hpp"
#include "uab/train.hpp"

namespace uab {

enum class Modality { disfluency, acoustic, interventions };

inline constexpr std::array<Modality, 3> kAllModalities{
    Modality::disfluency, Modality::acoustic, Modality::interventions};

std::string to_string(Modality m);
Modality modality_from_string(const std::string& name);

// Feature table as loaded from disk or synthesized, before any
// split-dependent transform: disfluency rates unscaled, acoustic pre-PCA.
struct RawDataset {
    std::vector<std::string> subject_ids;
    Matrix disfluency;                                // N x 11
    Matrix acoustic;                                  // N x D
    std::vector<InterventionSequence> interventions;  // N
    std::vector<double> labels;                       // N
    // Generator ground truth, synthetic data only (empty otherwise).
    std::vector<double> true_mean;
    std::vector<double> true_noise_std;
    std::string config_echo;

    std::size_t size() const { return labels.size(); }
};

struct SplitSpec {
    // Defaults reproduce the ADReSS corpus counts at N = 156:
    // 48 test subjects, then 22 of the remaining 108 for validation.
    double test_fraction = 48.0 / 156.0;
    double val_fraction_of_train = 0.20;
    std::uint64_t seed = 0;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

// Seeded shuffle, then test = round(N * test_fraction) indices, validation
// round(remaining * val_fraction_of_train) of the rest. Disjoint and
// exhaustive; identical seeds give identical splits.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);

enum class NoiseProfile { input_scaled, step, constant };

std::string to_string(NoiseProfile p);
NoiseProfile noise_profile_from_string(const std::string& name);

struct SyntheticSpec {
    int n = 0;
    int input_dim = 4;
    NoiseProfile noise_profile = NoiseProfile::input_scaled;
    std::uint64_t seed = 0;
};

// Desk-scale heteroscedastic generator. Latent x ~ Uniform[0,1]^d;
// label y = 15 + 20*(mean(x) - 0.5) + eps with eps ~ N(0, s(x)^2) and
//   input_scaled: s(x) = 0.5 + 3*x[0]
//   step:         s(x) = 0.5 where x[0] < 0.5, else 3.0
//   constant:     s(x) = 1.5.
// Each modality sees its own noisy view of x (tiled coordinates plus
// independent N(0, 0.1^2) observation noise); the interventions view
// thresholds a random walk driven by x into a 32-step two-token sequence.
// True conditional mean and noise std are retained for calibration checks.
RawDataset synthesize(const SyntheticSpec& spec);

// Split-dependent view consumed by training: disfluency min-max scaled,
// acoustic PCA-projected, all modalities aligned by index.
struct Dataset {
    std::vector<std::string> subject_ids;
    Matrix disfluency;                                // n x 11, scaled to [0,1] on train extrema
    Matrix acoustic;                                  // n x 21
    std::vector<InterventionSequence> interventions;  // n
    std::vector<double> labels;
    std::vector<double> true_noise_std;  // present for synthetic data

    std::size_t size() const { return labels.size(); }
    // Inputs plus targets for one modality (interventions one-hot encoded).
    ModalityData modality_data(Modality m) const;
    Input input_for(Modality m, std::size_t index) const;
};

struct PreparedSplits {
    Dataset train;
    Dataset val;
    Dataset test;
    SplitIndices indices;
    MinMaxScaler disfluency_scaler;
    PcaModel pca;
};

// Fits the disfluency scaler and the acoustic PCA on the train split only,
// then materializes all three splits. Test statistics never reach a model.
PreparedSplits prepare_splits(const RawDataset& raw, const SplitSpec& spec);

// --- loaders (formats documented in the README) ---

// CSV with a header row; first column subject_id, remaining columns reals.
Matrix load_feature_csv(const std::filesystem::path& path, std::vector<std::string>& ids);
// CSV `subject_id,mmse` with header; labels must lie in [0, 30].
std::vector<std::pair<std::string, double>> load_labels_csv(const std::filesystem::path& path);
// Every *.txt under the directory, subject id = file stem, sorted by id.
std::vector<Transcript> load_transcript_dir(const std::filesystem::path& dir);
// Directory layout: transcripts/, acoustic.csv, labels.csv. Ids must align
// exactly across the three sources; mismatches are reported in one error.
RawDataset load_data_dir(const std::filesystem::path& dir);

}  // namespace uab
