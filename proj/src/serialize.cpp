#include "uab/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uab/errors.hpp"

namespace uab {

std::string format_exact(double v) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_exact(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw DataError("invalid real number '" + std::string(s) + "'");
    return v;
}

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    return in;
}

void write_or_throw(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << content;
    if (!out) throw DataError("write failed: " + path.string());
}

std::string next_line(std::ifstream& in, const std::filesystem::path& path) {
    std::string line;
    if (!std::getline(in, line))
        throw DataError(path.string() + ": unexpected end of file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

void expect(bool cond, const std::filesystem::path& path, const std::string& what) {
    if (!cond) throw DataError(path.string() + ": " + what);
}

}  // namespace

void save_network(const Network& net, const std::filesystem::path& path) {
    const NetworkConfig& cfg = net.config();
    std::ostringstream out;
    out << "uab-model 1\n";
    out << "kind " << (cfg.kind == NetworkKind::feedforward ? "feedforward" : "recurrent") << "\n";
    out << "layers";
    for (int s : cfg.layer_sizes) out << " " << s;
    out << "\n";
    out << "seq-len " << cfg.seq_len << "\n";
    out << "seed " << cfg.seed << "\n";
    out << "params " << net.param_count() << "\n";
    for (double p : net.params()) out << format_exact(p) << "\n";
    write_or_throw(path, out.str());
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    expect(next_line(in, path) == "uab-model 1", path, "not a uab-model version 1 file");

    NetworkConfig cfg;
    {
        std::istringstream line(next_line(in, path));
        std::string tag, kind;
        line >> tag >> kind;
        expect(tag == "kind" && (kind == "feedforward" || kind == "recurrent"), path,
               "bad 'kind' line");
        cfg.kind = kind == "feedforward" ? NetworkKind::feedforward : NetworkKind::recurrent;
    }
    {
        std::istringstream line(next_line(in, path));
        std::string tag;
        line >> tag;
        expect(tag == "layers", path, "bad 'layers' line");
        int size = 0;
        while (line >> size) cfg.layer_sizes.push_back(size);
        expect(!cfg.layer_sizes.empty(), path, "empty layer list");
    }
    {
        std::istringstream line(next_line(in, path));
        std::string tag;
        line >> tag >> cfg.seq_len;
        expect(tag == "seq-len" && cfg.seq_len >= 1, path, "bad 'seq-len' line");
    }
    {
        std::istringstream line(next_line(in, path));
        std::string tag;
        line >> tag >> cfg.seed;
        expect(tag == "seed", path, "bad 'seed' line");
    }
    std::size_t count = 0;
    {
        std::istringstream line(next_line(in, path));
        std::string tag;
        line >> tag >> count;
        expect(tag == "params", path, "bad 'params' line");
    }

    Network net(cfg);
    expect(net.param_count() == count, path,
           "parameter count " + std::to_string(count) + " does not match architecture (" +
               std::to_string(net.param_count()) + ")");
    for (std::size_t i = 0; i < count; ++i) net.params()[i] = parse_exact(next_line(in, path));

    std::string leftover;
    while (std::getline(in, leftover))
        expect(leftover.empty() || leftover == "\r", path, "trailing content after parameters");
    return net;
}

void save_dataset_bundle(const RawDataset& data, const std::filesystem::path& path) {
    const std::size_t n = data.size();
    if (n == 0) throw DataError("save_dataset_bundle: empty dataset");
    const bool has_truth = !data.true_noise_std.empty();

    std::ostringstream out;
    out << "uab-dataset 1\n";
    out << "config " << data.config_echo << "\n";
    out << "n " << n << "\n";
    out << "disfluency-dim " << data.disfluency.cols << "\n";
    out << "acoustic-dim " << data.acoustic.cols << "\n";
    out << "intervention-steps " << kInterventionSteps << "\n";
    out << "has-truth " << (has_truth ? 1 : 0) << "\n";
    out << "subjects\n";
    for (const std::string& id : data.subject_ids) out << id << "\n";
    out << "labels\n";
    for (double y : data.labels) out << format_exact(y) << "\n";
    out << "disfluency\n";
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = data.disfluency.row(i);
        for (std::size_t j = 0; j < row.size(); ++j)
            out << (j ? " " : "") << format_exact(row[j]);
        out << "\n";
    }
    out << "acoustic\n";
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = data.acoustic.row(i);
        for (std::size_t j = 0; j < row.size(); ++j)
            out << (j ? " " : "") << format_exact(row[j]);
        out << "\n";
    }
    out << "interventions\n";
    for (const InterventionSequence& seq : data.interventions) {
        for (InterventionToken tok : seq.steps)
            out << (tok == InterventionToken::subject
                        ? 's'
                        : tok == InterventionToken::interviewer ? 'i' : 'p');
        out << "\n";
    }
    if (has_truth) {
        out << "truth\n";
        for (std::size_t i = 0; i < n; ++i)
            out << format_exact(data.true_mean[i]) << " " << format_exact(data.true_noise_std[i])
                << "\n";
    }
    out << "end\n";
    write_or_throw(path, out.str());
}

RawDataset load_dataset_bundle(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    expect(next_line(in, path) == "uab-dataset 1", path, "not a uab-dataset version 1 file");

    RawDataset data;
    {
        const std::string line = next_line(in, path);
        expect(line.rfind("config ", 0) == 0, path, "bad 'config' line");
        data.config_echo = line.substr(7);
    }
    auto read_sized = [&](const char* tag) -> std::size_t {
        std::istringstream line(next_line(in, path));
        std::string t;
        std::size_t v = 0;
        line >> t >> v;
        expect(t == tag, path, std::string("bad '") + tag + "' line");
        return v;
    };
    const std::size_t n = read_sized("n");
    expect(n > 0, path, "empty dataset");
    const std::size_t dis_dim = read_sized("disfluency-dim");
    const std::size_t aco_dim = read_sized("acoustic-dim");
    const std::size_t steps = read_sized("intervention-steps");
    expect(steps == kInterventionSteps, path, "unsupported intervention step count");
    const std::size_t has_truth = read_sized("has-truth");

    expect(next_line(in, path) == "subjects", path, "missing 'subjects' section");
    data.subject_ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) data.subject_ids.push_back(next_line(in, path));

    expect(next_line(in, path) == "labels", path, "missing 'labels' section");
    data.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) data.labels.push_back(parse_exact(next_line(in, path)));

    auto read_matrix = [&](const char* tag, std::size_t cols) {
        expect(next_line(in, path) == tag, path, std::string("missing '") + tag + "' section");
        Matrix m(n, cols);
        for (std::size_t i = 0; i < n; ++i) {
            std::istringstream line(next_line(in, path));
            std::string field;
            for (std::size_t j = 0; j < cols; ++j) {
                expect(static_cast<bool>(line >> field), path, "short matrix row");
                m(i, j) = parse_exact(field);
            }
            expect(!(line >> field), path, "long matrix row");
        }
        return m;
    };
    data.disfluency = read_matrix("disfluency", dis_dim);
    data.acoustic = read_matrix("acoustic", aco_dim);

    expect(next_line(in, path) == "interventions", path, "missing 'interventions' section");
    data.interventions.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string line = next_line(in, path);
        expect(line.size() == kInterventionSteps, path, "bad intervention sequence length");
        for (int t = 0; t < kInterventionSteps; ++t) {
            switch (line[t]) {
                case 's': data.interventions[i].steps[t] = InterventionToken::subject; break;
                case 'i': data.interventions[i].steps[t] = InterventionToken::interviewer; break;
                case 'p': data.interventions[i].steps[t] = InterventionToken::pad; break;
                default: expect(false, path, "bad intervention token");
            }
        }
    }

    if (has_truth) {
        expect(next_line(in, path) == "truth", path, "missing 'truth' section");
        data.true_mean.resize(n);
        data.true_noise_std.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::istringstream line(next_line(in, path));
            std::string a, b;
            expect(static_cast<bool>(line >> a >> b), path, "bad truth row");
            data.true_mean[i] = parse_exact(a);
            data.true_noise_std[i] = parse_exact(b);
        }
    }
    expect(next_line(in, path) == "end", path, "missing 'end' marker");
    return data;
}

void save_ensemble(const BoostedEnsemble& ens, const EnsembleManifest& manifest,
                   const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    nlohmann::json j;
    j["version"] = manifest.version;
    j["mode"] = to_string(manifest.mode);
    j["fusion"] = to_string(manifest.fusion);
    nlohmann::json order = nlohmann::json::array();
    for (Modality m : manifest.order) order.push_back(to_string(m));
    j["order"] = order;
    j["seed"] = manifest.seed;
    j["split"] = {{"test_fraction", manifest.split.test_fraction},
                  {"val_fraction_of_train", manifest.split.val_fraction_of_train},
                  {"seed", manifest.split.seed}};
    j["train"] = {{"batch_size", manifest.train_config.batch_size},
                  {"learning_rate", manifest.train_config.learning_rate},
                  {"max_epochs", manifest.train_config.max_epochs},
                  {"patience", manifest.train_config.patience},
                  {"seed", manifest.train_config.seed}};
    j["config_echo"] = manifest.config_echo;
    nlohmann::json learners = nlohmann::json::array();
    for (std::size_t k = 0; k < ens.learners.size(); ++k)
        learners.push_back({{"modality", to_string(ens.learners[k].modality)},
                            {"file", "learner_" + std::to_string(k) + ".model"}});
    j["learners"] = learners;
    j["weight_history"] = ens.boost_weight_history;

    write_or_throw(dir / "manifest.json", j.dump(2) + "\n");
    for (std::size_t k = 0; k < ens.learners.size(); ++k)
        save_network(ens.learners[k].net, dir / ("learner_" + std::to_string(k) + ".model"));
}

SavedEnsemble load_ensemble(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    std::ifstream in = open_or_throw(manifest_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(manifest_path.string() + ": " + e.what());
    }

    try {
        SavedEnsemble out;
        expect(j.at("version").get<int>() == 1, manifest_path, "unsupported manifest version");
        out.manifest.version = 1;
        out.manifest.mode = boost_mode_from_string(j.at("mode").get<std::string>());
        out.manifest.fusion = fusion_rule_from_string(j.at("fusion").get<std::string>());
        for (const auto& name : j.at("order"))
            out.manifest.order.push_back(modality_from_string(name.get<std::string>()));
        out.manifest.seed = j.at("seed").get<std::uint64_t>();
        out.manifest.split.test_fraction = j.at("split").at("test_fraction").get<double>();
        out.manifest.split.val_fraction_of_train =
            j.at("split").at("val_fraction_of_train").get<double>();
        out.manifest.split.seed = j.at("split").at("seed").get<std::uint64_t>();
        out.manifest.train_config.batch_size = j.at("train").at("batch_size").get<int>();
        out.manifest.train_config.learning_rate = j.at("train").at("learning_rate").get<double>();
        out.manifest.train_config.max_epochs = j.at("train").at("max_epochs").get<int>();
        out.manifest.train_config.patience = j.at("train").at("patience").get<int>();
        out.manifest.train_config.seed = j.at("train").at("seed").get<std::uint64_t>();
        out.manifest.config_echo = j.at("config_echo").get<std::string>();

        out.ensemble.mode = out.manifest.mode;
        out.ensemble.fusion = out.manifest.fusion;
        out.ensemble.boost_weight_history =
            j.at("weight_history").get<std::vector<std::vector<double>>>();
        for (const auto& entry : j.at("learners")) {
            EnsembleLearner learner{
                modality_from_string(entry.at("modality").get<std::string>()),
                load_network(dir / entry.at("file").get<std::string>()),
                TrainLog{}};
            out.ensemble.learners.push_back(std::move(learner));
        }
        expect(!out.ensemble.learners.empty(), manifest_path, "manifest lists no learners");
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(manifest_path.string() + ": " + e.what());
    }
}

}  // namespace uab
