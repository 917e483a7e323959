#include "uab/commands.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "uab/errors.hpp"
#include "uab/rng.hpp"

namespace uab {

namespace {

// sub-seed streams derived from one evaluation seed
constexpr std::uint64_t kSplitStream = 0x51;
constexpr std::uint64_t kEnsembleStream = 0x52;
constexpr std::uint64_t kSoloStream = 0x60;  // + modality index

std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
    std::ostringstream out;
    for (std::size_t i = 0; i < seeds.size(); ++i) out << (i ? "," : "") << seeds[i];
    return out.str();
}

std::string join_order(const std::vector<Modality>& order) {
    std::ostringstream out;
    for (std::size_t i = 0; i < order.size(); ++i) out << (i ? "," : "") << to_string(order[i]);
    return out.str();
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

void RunConfig::normalize() {
    if (order.empty()) order = default_boost_order();
    std::set<Modality> seen(order.begin(), order.end());
    if (order.size() != kAllModalities.size() || seen.size() != kAllModalities.size())
        throw ConfigError("order must be a permutation of disfluency,acoustic,interventions");
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    std::set<std::uint64_t> unique_seeds(seeds.begin(), seeds.end());
    if (unique_seeds.size() != seeds.size()) throw ConfigError("seeds must be distinct");
    if (jobs < 1) throw ConfigError("--jobs must be >= 1");
    if (train_config.batch_size < 1) throw ConfigError("--batch must be >= 1");
    if (train_config.max_epochs < 1) throw ConfigError("--epochs must be >= 1");
    if (train_config.patience < 1 || train_config.patience > train_config.max_epochs)
        throw ConfigError("--patience must be in [1, --epochs]");
    if (!(train_config.learning_rate > 0.0)) throw ConfigError("--lr must be positive");

    const bool needs_data =
        command == "train" || command == "evaluate" || command == "compare" || command == "entropy";
    if (needs_data && !data_file && !data_dir)
        throw ConfigError(command + " needs --data or --data-dir");
    if (data_file && data_dir) throw ConfigError("give only one of --data / --data-dir");
}

std::string config_echo(const RunConfig& cfg) {
    std::ostringstream out;
    out << "uab " << cfg.command;
    auto data_source = [&]() {
        if (cfg.data_file) out << " --data=" << cfg.data_file->string();
        if (cfg.data_dir) out << " --data-dir=" << cfg.data_dir->string();
    };
    auto hyper = [&]() {
        out << " --lr=" << format_exact(cfg.train_config.learning_rate)
            << " --batch=" << cfg.train_config.batch_size
            << " --epochs=" << cfg.train_config.max_epochs
            << " --patience=" << cfg.train_config.patience;
    };
    auto split_fractions = [&]() {
        out << " --test-fraction=" << format_exact(cfg.split.test_fraction)
            << " --val-fraction=" << format_exact(cfg.split.val_fraction_of_train);
    };
    if (cfg.command == "synth") {
        out << " --n=" << cfg.synth.n << " --input-dim=" << cfg.synth.input_dim
            << " --noise=" << to_string(cfg.synth.noise_profile) << " --seed=" << cfg.synth.seed;
    } else if (cfg.command == "extract") {
        data_source();
    } else if (cfg.command == "train") {
        data_source();
        out << " --mode=" << to_string(cfg.mode) << " --fusion=" << to_string(cfg.fusion)
            << " --order=" << join_order(cfg.order) << " --seeds=" << cfg.seeds.front();
        if (cfg.cumulative_weights) out << " --cumulative";
        hyper();
        split_fractions();
    } else if (cfg.command == "evaluate") {
        if (cfg.bundle) out << " --bundle=" << cfg.bundle->string();
        data_source();
    } else {  // compare, entropy
        data_source();
        out << " --order=" << join_order(cfg.order) << " --seeds=" << join_seeds(cfg.seeds);
        if (cfg.cumulative_weights) out << " --cumulative";
        hyper();
        split_fractions();
    }
    return out.str();
}

RawDataset load_input_data(const RunConfig& cfg) {
    if (cfg.data_file) return load_dataset_bundle(*cfg.data_file);
    if (cfg.data_dir) return load_data_dir(*cfg.data_dir);
    throw ConfigError(cfg.command + ": no data source configured");
}

SeedArtifacts run_protocol_seed(const RawDataset& raw, const RunConfig& cfg, std::uint64_t seed,
                                bool train_individual) {
    SeedArtifacts art;
    art.seed = seed;

    SplitSpec split = cfg.split;
    split.seed = Rng::mix(seed, kSplitStream);
    art.splits = prepare_splits(raw, split);
    const Dataset& train_split = art.splits.train;
    const Dataset& val_split = art.splits.val;
    const Dataset& test_split = art.splits.test;

    const std::vector<double> uniform(train_split.size(), 1.0);

    // standalone learners, uniform weights
    for (std::size_t m = 0; train_individual && m < kAllModalities.size(); ++m) {
        const Modality modality = kAllModalities[m];
        LearnerSpec spec = learner_config_for(modality);
        spec.config.seed = Rng::mix(seed, kSoloStream + 2 * m);
        TrainConfig tc = cfg.train_config;
        tc.seed = Rng::mix(seed, kSoloStream + 2 * m + 1);
        TrainResult result = train(spec.config, train_split.modality_data(modality),
                                   val_split.modality_data(modality), uniform, tc);
        std::vector<double> mus(test_split.size(), 0.0);
        for (std::size_t i = 0; i < test_split.size(); ++i)
            mus[i] = result.net.predict(test_split.input_for(modality, i)).mu;
        art.individual_rmse[m] = rmse(mus, test_split.labels);
        art.individual.push_back(std::move(result));
    }

    // boosted ensembles share the stage seeds, so stage one is identical
    TrainConfig ens_tc = cfg.train_config;
    ens_tc.seed = Rng::mix(seed, kEnsembleStream);
    const auto specs = learner_specs_for_order(cfg.order);

    EnsembleTrainOptions vanilla_opts{BoostMode::vanilla, FusionRule::mean,
                                      cfg.cumulative_weights};
    art.vanilla = train_ensemble(train_split, val_split, specs, vanilla_opts, ens_tc);
    art.vanilla_rmse = rmse(predict_ensemble_fused(art.vanilla, test_split), test_split.labels);

    EnsembleTrainOptions ua_opts{BoostMode::ua, FusionRule::mean, cfg.cumulative_weights};
    art.ua = train_ensemble(train_split, val_split, specs, ua_opts, ens_tc);
    art.ua_rmse = rmse(predict_ensemble_fused(art.ua, test_split), test_split.labels);

    // same trained ensemble, inverse-sigma fusion
    BoostedEnsemble weighted = art.ua;
    weighted.fusion = FusionRule::inverse_sigma;
    art.ua_weighted_rmse =
        rmse(predict_ensemble_fused(weighted, test_split), test_split.labels);
    return art;
}

std::filesystem::path run_synth(const RunConfig& cfg) {
    RawDataset data = synthesize(cfg.synth);
    data.config_echo = config_echo(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = cfg.out_dir / "dataset.uds";
    save_dataset_bundle(data, path);
    return path;
}

std::filesystem::path run_extract(const RunConfig& cfg) {
    if (!cfg.data_dir) throw ConfigError("extract needs --data-dir");
    RawDataset data = load_data_dir(*cfg.data_dir);
    data.config_echo = config_echo(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = cfg.out_dir / "dataset.uds";
    save_dataset_bundle(data, path);
    return path;
}

std::filesystem::path run_train(const RunConfig& cfg) {
    const RawDataset raw = load_input_data(cfg);
    const std::uint64_t seed = cfg.seeds.front();

    SplitSpec split = cfg.split;
    split.seed = Rng::mix(seed, kSplitStream);
    const PreparedSplits splits = prepare_splits(raw, split);

    TrainConfig tc = cfg.train_config;
    tc.seed = Rng::mix(seed, kEnsembleStream);
    EnsembleTrainOptions opts{cfg.mode, cfg.fusion, cfg.cumulative_weights};
    const BoostedEnsemble ens =
        train_ensemble(splits.train, splits.val, learner_specs_for_order(cfg.order), opts, tc);

    EnsembleManifest manifest;
    manifest.mode = cfg.mode;
    manifest.fusion = cfg.fusion;
    manifest.order = cfg.order;
    manifest.seed = seed;
    manifest.split = split;
    manifest.train_config = tc;
    manifest.config_echo = config_echo(cfg);

    const auto dir = cfg.out_dir / "ensemble";
    save_ensemble(ens, manifest, dir);
    return dir;
}

EvaluateOutcome run_evaluate(const RunConfig& cfg) {
    if (!cfg.bundle) throw ConfigError("evaluate needs --bundle");
    const SavedEnsemble saved = load_ensemble(*cfg.bundle);
    const RawDataset raw = load_input_data(cfg);
    const PreparedSplits splits = prepare_splits(raw, saved.manifest.split);

    EvaluateOutcome out;
    out.test_rmse =
        rmse(predict_ensemble_fused(saved.ensemble, splits.test), splits.test.labels);
    for (const EnsembleLearner& learner : saved.ensemble.learners) {
        std::vector<double> mus(splits.test.size(), 0.0);
        for (std::size_t i = 0; i < splits.test.size(); ++i)
            mus[i] = learner.net.predict(splits.test.input_for(learner.modality, i)).mu;
        out.per_learner_rmse.emplace_back(learner.modality, rmse(mus, splits.test.labels));
    }
    return out;
}

CompareOutcome run_compare(const RunConfig& cfg, bool write_artifacts) {
    if (cfg.seeds.size() < 2)
        throw ConfigError("compare needs at least 2 seeds for mean/std reporting");
    const RawDataset raw = load_input_data(cfg);

    CompareOutcome outcome;
    outcome.per_seed.resize(cfg.seeds.size());
    parallel_for(cfg.seeds.size(), cfg.jobs, [&](std::size_t i) {
        outcome.per_seed[i] = run_protocol_seed(raw, cfg, cfg.seeds[i]);
    });

    // Aggregation reads the precomputed per-seed values; order follows the
    // seed list regardless of worker scheduling.
    auto report_for = [&](const std::function<double(const SeedArtifacts&)>& metric) {
        std::size_t cursor = 0;
        return multi_seed_evaluate(
            [&](std::uint64_t) { return metric(outcome.per_seed[cursor++]); }, cfg.seeds);
    };
    for (std::size_t m = 0; m < kAllModalities.size(); ++m)
        outcome.rows.push_back({to_string(kAllModalities[m]), "none", "none",
                                report_for([m](const SeedArtifacts& a) {
                                    return a.individual_rmse[m];
                                })});
    outcome.rows.push_back({"ensemble", "vanilla", "mean",
                            report_for([](const SeedArtifacts& a) { return a.vanilla_rmse; })});
    outcome.rows.push_back({"ensemble", "ua", "mean",
                            report_for([](const SeedArtifacts& a) { return a.ua_rmse; })});
    outcome.rows.push_back(
        {"ensemble", "ua", "inverse_sigma",
         report_for([](const SeedArtifacts& a) { return a.ua_weighted_rmse; })});

    const SeedArtifacts& first = outcome.per_seed.front();
    outcome.vanilla_entropy = make_entropy_report(first.vanilla, first.splits.test);
    outcome.ua_entropy = make_entropy_report(first.ua, first.splits.test);

    if (write_artifacts)
        emit_reports(outcome.rows, outcome.vanilla_entropy, outcome.ua_entropy, config_echo(cfg),
                     cfg.out_dir);
    return outcome;
}

void run_entropy(const RunConfig& cfg) {
    const RawDataset raw = load_input_data(cfg);
    const SeedArtifacts art = run_protocol_seed(raw, cfg, cfg.seeds.front(),
                                                /*train_individual=*/false);
    std::filesystem::create_directories(cfg.out_dir);
    write_entropy_svg(make_entropy_report(art.vanilla, art.splits.test),
                      make_entropy_report(art.ua, art.splits.test), config_echo(cfg),
                      cfg.out_dir / "entropy.svg");
}

}  // namespace uab
