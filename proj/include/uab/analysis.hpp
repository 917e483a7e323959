#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "uab/dataset.hpp"
#include "uab/ensemble.hpp"
#include "uab/gaussian.hpp"

namespace uab {

double rmse(std::span<const double> predictions, std::span<const double> targets);

// Differential entropy of the predictive Gaussian, ln(2*pi*e*sigma^2)/2,
// in nats. Strictly increasing in sigma.
double predictive_entropy(const GaussianPrediction& pred);

struct KdeSpec {
    enum class Bandwidth { scott, fixed };
    Bandwidth bandwidth = Bandwidth::scott;
    double fixed_bandwidth = 0.0;
    int grid_points = 256;
};

struct KdeCurve {
    std::vector<double> grid;
    std::vector<double> density;
};

// Gaussian-kernel density estimate on a grid spanning [min-3h, max+3h].
// Scott's rule (sample_std * n^(-1/5)) needs at least two values with
// positive spread; a fixed bandwidth works for any non-empty input.
KdeCurve kde(std::span<const double> values, const KdeSpec& spec = {});

struct EvalReport {
    std::vector<double> per_seed_rmse;
    double mean_rmse = 0.0;
    double std_rmse = 0.0;  // sample (n-1) convention
    std::vector<std::uint64_t> seeds;
};

// Runs the callback once per seed (order preserved) and aggregates. A
// failing run aborts with the offending seed named.
EvalReport multi_seed_evaluate(const std::function<double(std::uint64_t)>& run,
                               std::span<const std::uint64_t> seeds);

struct StageEntropy {
    std::string label;              // modality of the stage's learner
    std::vector<double> entropies;  // per test sample, nats
    KdeCurve curve;
};

struct EntropyReport {
    std::vector<StageEntropy> stages;
};

EntropyReport make_entropy_report(const BoostedEnsemble& ens, const Dataset& test,
                                  const KdeSpec& spec = {});

struct MethodResult {
    std::string model;   // disfluency | acoustic | interventions | ensemble
    std::string mode;    // none | vanilla | ua
    std::string fusion;  // none | mean | inverse_sigma
    EvalReport report;
};

// results.csv: a `# config:` provenance line, a header, then one row per
// method with mean/std and per-seed RMSE columns. Byte-stable given inputs.
void write_results_csv(std::span<const MethodResult> rows, const std::string& config_echo,
                       const std::filesystem::path& path);

// entropy.svg: two panels of per-stage entropy KDE curves, vanilla boosting
// on the left, uncertainty-aware on the right, shared axes. Byte-stable.
void write_entropy_svg(const EntropyReport& vanilla, const EntropyReport& ua,
                       const std::string& config_echo, const std::filesystem::path& path);

void emit_reports(std::span<const MethodResult> rows, const EntropyReport& vanilla,
                  const EntropyReport& ua, const std::string& config_echo,
                  const std::filesystem::path& out_dir);

}  // namespace uab
