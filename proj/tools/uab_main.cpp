#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "uab/commands.hpp"
#include "uab/errors.hpp"

namespace {

// exit codes: 0 ok, 2 config error, 3 data error, 4 training failure
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kDataError = 3;
constexpr int kTrainError = 4;

std::string single_line(std::string message) {
    for (char& c : message)
        if (c == '\n' || c == '\r') c = ';';
    return message;
}

void print_error(const char* category, const std::string& message) {
    std::cerr << "uab: error: " << category << ": " << single_line(message) << "\n";
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream ss(csv);
    while (std::getline(ss, item, ',')) items.push_back(item);
    return items;
}

struct CliOptions {
    uab::RunConfig cfg;
    std::string order_csv;
    std::string seeds_csv;
    std::string mode_name = "ua";
    std::string fusion_name = "inverse-sigma";
    std::string noise_name = "input_scaled";
    std::string data_file;
    std::string data_dir;
    std::string bundle;
    std::string out_dir = ".";
    std::uint64_t synth_seed = 0;
};

void add_data_flags(CLI::App* sub, CliOptions& opt) {
    sub->add_option("--data", opt.data_file, "dataset bundle produced by synth/extract");
    sub->add_option("--data-dir", opt.data_dir,
                    "directory with transcripts/, acoustic.csv, labels.csv");
}

void add_protocol_flags(CLI::App* sub, CliOptions& opt) {
    sub->add_option("--mode", opt.mode_name, "boosting weights: vanilla|ua");
    sub->add_option("--fusion", opt.fusion_name, "prediction fusion: mean|inverse-sigma");
    sub->add_option("--order", opt.order_csv,
                    "boosting order, e.g. disfluency,interventions,acoustic");
    sub->add_option("--seeds", opt.seeds_csv, "comma-separated evaluation seeds (default 0..4)");
    sub->add_option("--lr", opt.cfg.train_config.learning_rate, "Adam learning rate");
    sub->add_option("--batch", opt.cfg.train_config.batch_size, "minibatch size");
    sub->add_option("--epochs", opt.cfg.train_config.max_epochs, "maximum training epochs");
    sub->add_option("--patience", opt.cfg.train_config.patience,
                    "early-stopping patience (validation NLL)");
    sub->add_option("--test-fraction", opt.cfg.split.test_fraction, "test split fraction");
    sub->add_option("--val-fraction", opt.cfg.split.val_fraction_of_train,
                    "validation fraction of the train split");
    sub->add_flag("--cumulative", opt.cfg.cumulative_weights,
                  "chain boost weights across all previous stages");
    sub->add_option("--jobs", opt.cfg.jobs, "concurrent per-seed runs");
}

void finalize(CliOptions& opt) {
    if (!opt.data_file.empty()) opt.cfg.data_file = opt.data_file;
    if (!opt.data_dir.empty()) opt.cfg.data_dir = opt.data_dir;
    if (!opt.bundle.empty()) opt.cfg.bundle = opt.bundle;
    opt.cfg.out_dir = opt.out_dir;
    opt.cfg.mode = uab::boost_mode_from_string(opt.mode_name);
    opt.cfg.fusion = uab::fusion_rule_from_string(opt.fusion_name);
    opt.cfg.synth.noise_profile = uab::noise_profile_from_string(opt.noise_name);
    opt.cfg.synth.seed = opt.synth_seed;
    if (!opt.order_csv.empty()) {
        opt.cfg.order.clear();
        for (const std::string& name : split_list(opt.order_csv))
            opt.cfg.order.push_back(uab::modality_from_string(name));
    }
    if (!opt.seeds_csv.empty()) {
        opt.cfg.seeds.clear();
        for (const std::string& item : split_list(opt.seeds_csv)) {
            try {
                std::size_t used = 0;
                const unsigned long long v = std::stoull(item, &used);
                if (used != item.size()) throw std::invalid_argument(item);
                opt.cfg.seeds.push_back(v);
            } catch (const std::exception&) {
                throw uab::ConfigError("invalid seed '" + item + "' in --seeds");
            }
        }
    }
    opt.cfg.normalize();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uncertainty-aware boosted ensembles of heteroscedastic regressors"};
    app.require_subcommand(1);

    CliOptions opt;

    CLI::App* synth = app.add_subcommand("synth", "write a synthetic heteroscedastic dataset");
    synth->add_option("--n", opt.cfg.synth.n, "number of samples (>= 40)")->required();
    synth->add_option("--input-dim", opt.cfg.synth.input_dim, "latent input dimensionality");
    synth->add_option("--noise", opt.noise_name, "noise profile: input_scaled|step|constant");
    synth->add_option("--seed", opt.synth_seed, "generator seed");
    synth->add_option("--out", opt.out_dir, "output directory");

    CLI::App* extract = app.add_subcommand("extract", "build a dataset bundle from raw files");
    add_data_flags(extract, opt);
    extract->add_option("--out", opt.out_dir, "output directory");

    CLI::App* train = app.add_subcommand("train", "train one boosted ensemble (first seed)");
    add_data_flags(train, opt);
    add_protocol_flags(train, opt);
    train->add_option("--out", opt.out_dir, "output directory");

    CLI::App* evaluate = app.add_subcommand("evaluate", "test RMSE of a saved ensemble bundle");
    add_data_flags(evaluate, opt);
    evaluate->add_option("--bundle", opt.bundle, "ensemble bundle directory")->required();

    CLI::App* compare =
        app.add_subcommand("compare", "individual learners vs vanilla/ua/ua-weighted ensembles");
    add_data_flags(compare, opt);
    add_protocol_flags(compare, opt);
    compare->add_option("--out", opt.out_dir, "output directory");

    CLI::App* entropy = app.add_subcommand("entropy", "per-stage entropy KDE study (first seed)");
    add_data_flags(entropy, opt);
    add_protocol_flags(entropy, opt);
    entropy->add_option("--out", opt.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("config", e.what());
        return kConfigError;
    }

    try {
        opt.cfg.command = app.get_subcommands().front()->get_name();
        finalize(opt);

        if (synth->parsed()) {
            const auto path = uab::run_synth(opt.cfg);
            std::cout << "wrote " << path.string() << "\n";
        } else if (extract->parsed()) {
            const auto path = uab::run_extract(opt.cfg);
            std::cout << "wrote " << path.string() << "\n";
        } else if (train->parsed()) {
            const auto dir = uab::run_train(opt.cfg);
            std::cout << "wrote " << dir.string() << "\n";
        } else if (evaluate->parsed()) {
            const auto outcome = uab::run_evaluate(opt.cfg);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6f", outcome.test_rmse);
            std::cout << "test_rmse=" << buf << "\n";
            for (const auto& [modality, value] : outcome.per_learner_rmse) {
                std::snprintf(buf, sizeof buf, "%.6f", value);
                std::cout << "rmse_" << uab::to_string(modality) << "=" << buf << "\n";
            }
        } else if (compare->parsed()) {
            const auto outcome = uab::run_compare(opt.cfg);
            std::cout << "wrote " << (opt.cfg.out_dir / "results.csv").string() << "\n";
            std::cout << "wrote " << (opt.cfg.out_dir / "entropy.svg").string() << "\n";
            for (const auto& row : outcome.rows) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "%-14s mode=%-8s fusion=%-14s rmse=%.4f +/- %.4f",
                              row.model.c_str(), row.mode.c_str(), row.fusion.c_str(),
                              row.report.mean_rmse, row.report.std_rmse);
                std::cout << buf << "\n";
            }
        } else if (entropy->parsed()) {
            uab::run_entropy(opt.cfg);
            std::cout << "wrote " << (opt.cfg.out_dir / "entropy.svg").string() << "\n";
        }
        return kOk;
    } catch (const uab::ConfigError& e) {
        print_error("config", e.what());
        return kConfigError;
    } catch (const uab::DataError& e) {
        print_error("data", e.what());
        return kDataError;
    } catch (const uab::TrainError& e) {
        print_error("train", e.what());
        return kTrainError;
    } catch (const std::invalid_argument& e) {
        print_error("config", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
}
