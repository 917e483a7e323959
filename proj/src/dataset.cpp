#include "uab/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "uab/errors.hpp"
#include "uab/rng.hpp"

namespace uab {

std::string to_string(Modality m) {
    switch (m) {
        case Modality::disfluency: return "disfluency";
        case Modality::acoustic: return "acoustic";
        case Modality::interventions: return "interventions";
    }
    return "?";
}

Modality modality_from_string(const std::string& name) {
    for (Modality m : kAllModalities)
        if (to_string(m) == name) return m;
    throw ConfigError("unknown modality '" + name + "'");
}

std::string to_string(NoiseProfile p) {
    switch (p) {
        case NoiseProfile::input_scaled: return "input_scaled";
        case NoiseProfile::step: return "step";
        case NoiseProfile::constant: return "constant";
    }
    return "?";
}

NoiseProfile noise_profile_from_string(const std::string& name) {
    if (name == "input_scaled") return NoiseProfile::input_scaled;
    if (name == "step") return NoiseProfile::step;
    if (name == "constant") return NoiseProfile::constant;
    throw ConfigError("unknown noise profile '" + name + "'");
}

namespace {

std::size_t round_half_up(double x) {
    return static_cast<std::size_t>(std::floor(x + 0.5));
}

}  // namespace

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
    if (n < 10) throw DataError("split: need at least 10 samples, got " + std::to_string(n));
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
        throw ConfigError("split: test_fraction must lie in (0,1)");
    if (!(spec.val_fraction_of_train > 0.0 && spec.val_fraction_of_train < 1.0))
        throw ConfigError("split: val_fraction_of_train must lie in (0,1)");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(spec.seed);
    rng.shuffle(order);

    const std::size_t n_test = round_half_up(static_cast<double>(n) * spec.test_fraction);
    if (n_test == 0 || n_test >= n) throw DataError("split: degenerate split (empty part)");
    const std::size_t n_rest = n - n_test;
    const std::size_t n_val = round_half_up(static_cast<double>(n_rest) * spec.val_fraction_of_train);
    if (n_val == 0 || n_val >= n_rest) throw DataError("split: degenerate split (empty part)");

    SplitIndices out;
    out.test.assign(order.begin(), order.begin() + n_test);
    out.val.assign(order.begin() + n_test, order.begin() + n_test + n_val);
    out.train.assign(order.begin() + n_test + n_val, order.end());
    return out;
}

RawDataset synthesize(const SyntheticSpec& spec) {
    if (spec.n < 40) throw ConfigError("synthesize: n must be >= 40");
    if (spec.input_dim < 1) throw ConfigError("synthesize: input_dim must be >= 1");

    const int d = spec.input_dim;
    const std::size_t n = static_cast<std::size_t>(spec.n);
    Rng rng(spec.seed);

    RawDataset out;
    out.subject_ids.resize(n);
    out.disfluency = Matrix(n, kDisfluencyDim);
    out.acoustic = Matrix(n, kPcaComponents);
    out.interventions.resize(n);
    out.labels.resize(n);
    out.true_mean.resize(n);
    out.true_noise_std.resize(n);

    std::vector<double> x(static_cast<std::size_t>(d), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (double& v : x) v = rng.uniform();
        const double mean_x = mean(x);
        const double clean = 15.0 + 20.0 * (mean_x - 0.5);

        double s = 1.5;
        switch (spec.noise_profile) {
            case NoiseProfile::input_scaled: s = 0.5 + 3.0 * x[0]; break;
            case NoiseProfile::step: s = x[0] < 0.5 ? 0.5 : 3.0; break;
            case NoiseProfile::constant: s = 1.5; break;
        }

        out.true_mean[i] = clean;
        out.true_noise_std[i] = s;
        out.labels[i] = clean + s * rng.normal();

        for (int j = 0; j < kDisfluencyDim; ++j)
            out.disfluency(i, j) = x[j % d] + 0.1 * rng.normal();
        for (int j = 0; j < kPcaComponents; ++j)
            out.acoustic(i, j) = x[j % d] + 0.1 * rng.normal();

        // Random walk in blocks, one coordinate per block: the walk restarts
        // at each block and drifts by (x_c - 0.5) per step, and the running
        // sum is thresholded against a fixed in-block ramp. The resulting
        // tokens form a noisy thermometer code of each coordinate. Blocks run
        // in reverse coordinate order so x[0], the noise driver, sits next to
        // the recurrent readout.
        const int block_len = std::max(1, kInterventionSteps / d);
        double walk = 0.0;
        for (int t = 0; t < kInterventionSteps; ++t) {
            const int in_block = t % block_len;
            if (in_block == 0) walk = 0.0;
            const int coord = (d - 1 - (t / block_len) % d + d) % d;
            walk += (x[coord] - 0.5) + 0.1 * rng.normal();
            const double level = -0.45 + 0.9 * (in_block + 0.5) / block_len;
            const double threshold = (in_block + 1) * level;
            out.interventions[i].steps[t] =
                walk > threshold ? InterventionToken::subject : InterventionToken::interviewer;
        }

        char id[24];
        std::snprintf(id, sizeof id, "syn%05zu", i);
        out.subject_ids[i] = id;
    }
    return out;
}

Input Dataset::input_for(Modality m, std::size_t index) const {
    Input input;
    switch (m) {
        case Modality::disfluency: {
            const auto row = disfluency.row(index);
            input.values.assign(row.begin(), row.end());
            input.steps = 1;
            break;
        }
        case Modality::acoustic: {
            const auto row = acoustic.row(index);
            input.values.assign(row.begin(), row.end());
            input.steps = 1;
            break;
        }
        case Modality::interventions: {
            input.values.assign(kInterventionSteps * 3, 0.0);
            input.steps = kInterventionSteps;
            const InterventionSequence& seq = interventions[index];
            for (int t = 0; t < kInterventionSteps; ++t)
                input.values[static_cast<std::size_t>(t) * 3 +
                             static_cast<std::size_t>(seq.steps[t])] = 1.0;
            break;
        }
    }
    return input;
}

ModalityData Dataset::modality_data(Modality m) const {
    ModalityData data;
    data.inputs.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) data.inputs.push_back(input_for(m, i));
    data.targets = labels;
    return data;
}

namespace {

template <typename T>
std::vector<T> select(const std::vector<T>& src, std::span<const std::size_t> idx) {
    std::vector<T> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(src[i]);
    return out;
}

Dataset materialize(const RawDataset& raw, std::span<const std::size_t> idx,
                    const MinMaxScaler& scaler, const PcaModel& pca) {
    Dataset out;
    out.subject_ids = select(raw.subject_ids, idx);
    out.disfluency = scaler.transform(raw.disfluency.select_rows(idx));
    out.acoustic = pca_project(pca, raw.acoustic.select_rows(idx));
    out.interventions = select(raw.interventions, idx);
    out.labels = select(raw.labels, idx);
    if (!raw.true_noise_std.empty()) out.true_noise_std = select(raw.true_noise_std, idx);
    return out;
}

}  // namespace

PreparedSplits prepare_splits(const RawDataset& raw, const SplitSpec& spec) {
    if (raw.size() == 0) throw DataError("prepare_splits: empty dataset");
    if (raw.disfluency.rows != raw.size() || raw.acoustic.rows != raw.size() ||
        raw.interventions.size() != raw.size())
        throw DataError("prepare_splits: modality row counts disagree");

    PreparedSplits out;
    out.indices = split_indices(raw.size(), spec);
    const Matrix train_disfluency = raw.disfluency.select_rows(out.indices.train);
    const Matrix train_acoustic = raw.acoustic.select_rows(out.indices.train);
    out.disfluency_scaler = MinMaxScaler::fit(train_disfluency);
    out.pca = pca_fit(train_acoustic, kPcaComponents);
    out.train = materialize(raw, out.indices.train, out.disfluency_scaler, out.pca);
    out.val = materialize(raw, out.indices.val, out.disfluency_scaler, out.pca);
    out.test = materialize(raw, out.indices.test, out.disfluency_scaler, out.pca);
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_real(const std::string& s, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty())
        throw DataError(where + ": invalid number '" + s + "'");
    return v;
}

}  // namespace

Matrix load_feature_csv(const std::filesystem::path& path, std::vector<std::string>& ids) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open feature csv: " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw DataError(path.string() + ": missing header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t dims = split_csv_line(line).size();
    if (dims < 2) throw DataError(path.string() + ": header needs subject_id plus features");

    ids.clear();
    std::vector<double> values;
    std::set<std::string> seen;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != dims)
            throw DataError(path.string() + " line " + std::to_string(line_no) + ": expected " +
                            std::to_string(dims) + " fields, got " + std::to_string(fields.size()));
        if (!seen.insert(fields[0]).second)
            throw DataError(path.string() + ": duplicate subject_id '" + fields[0] + "'");
        ids.push_back(fields[0]);
        for (std::size_t j = 1; j < dims; ++j)
            values.push_back(parse_real(fields[j],
                                        path.string() + " line " + std::to_string(line_no)));
    }
    if (ids.empty()) throw DataError(path.string() + ": no data rows");

    Matrix out(ids.size(), dims - 1);
    out.data = std::move(values);
    return out;
}

std::vector<std::pair<std::string, double>> load_labels_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open labels csv: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw DataError(path.string() + ": missing header row");

    std::vector<std::pair<std::string, double>> out;
    std::set<std::string> seen;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw DataError(path.string() + " line " + std::to_string(line_no) +
                            ": expected 'subject_id,mmse'");
        if (!seen.insert(fields[0]).second)
            throw DataError(path.string() + ": duplicate subject_id '" + fields[0] + "'");
        const double label =
            parse_real(fields[1], path.string() + " line " + std::to_string(line_no));
        if (label < 0.0 || label > 30.0)
            throw DataError(path.string() + " line " + std::to_string(line_no) + ": label " +
                            fields[1] + " outside [0, 30]");
        out.emplace_back(fields[0], label);
    }
    if (out.empty()) throw DataError(path.string() + ": no data rows");
    return out;
}

std::vector<Transcript> load_transcript_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw DataError("transcript directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no *.txt transcripts under " + dir.string());

    std::vector<Transcript> out;
    std::set<std::string> seen;
    for (const auto& file : files) {
        Transcript t = parse_transcript_file(file);
        if (!seen.insert(t.subject_id).second)
            throw DataError("duplicate subject_id '" + t.subject_id + "' in " + dir.string());
        out.push_back(std::move(t));
    }
    return out;
}

RawDataset load_data_dir(const std::filesystem::path& dir) {
    const auto transcripts = load_transcript_dir(dir / "transcripts");
    std::vector<std::string> acoustic_ids;
    const Matrix acoustic = load_feature_csv(dir / "acoustic.csv", acoustic_ids);
    const auto labels = load_labels_csv(dir / "labels.csv");

    std::map<std::string, std::size_t> transcript_by_id;
    for (std::size_t i = 0; i < transcripts.size(); ++i)
        transcript_by_id.emplace(transcripts[i].subject_id, i);
    std::map<std::string, std::size_t> acoustic_by_id;
    for (std::size_t i = 0; i < acoustic_ids.size(); ++i)
        acoustic_by_id.emplace(acoustic_ids[i], i);
    std::map<std::string, double> label_by_id(labels.begin(), labels.end());

    // Union of ids, with every mismatch collected into one report.
    std::set<std::string> all_ids;
    for (const auto& [id, _] : transcript_by_id) all_ids.insert(id);
    for (const auto& [id, _] : acoustic_by_id) all_ids.insert(id);
    for (const auto& [id, _] : label_by_id) all_ids.insert(id);

    std::string problems;
    for (const std::string& id : all_ids) {
        std::string missing;
        if (!transcript_by_id.count(id)) missing += " transcripts";
        if (!acoustic_by_id.count(id)) missing += " acoustic";
        if (!label_by_id.count(id)) missing += " labels";
        if (!missing.empty()) problems += "\n  " + id + ": missing in" + missing;
    }
    if (!problems.empty())
        throw DataError("subject ids do not align across sources:" + problems);

    RawDataset out;
    const std::size_t n = all_ids.size();
    out.subject_ids.assign(all_ids.begin(), all_ids.end());  // sorted, deterministic
    out.disfluency = Matrix(n, kDisfluencyDim);
    out.acoustic = Matrix(n, acoustic.cols);
    out.interventions.resize(n);
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& id = out.subject_ids[i];
        const Transcript& t = transcripts[transcript_by_id.at(id)];
        const auto dis = extract_disfluency(t).as_array();
        std::copy(dis.begin(), dis.end(), out.disfluency.row(i).begin());
        const auto src = acoustic.row(acoustic_by_id.at(id));
        std::copy(src.begin(), src.end(), out.acoustic.row(i).begin());
        out.interventions[i] = extract_interventions(t);
        out.labels[i] = label_by_id.at(id);
    }
    return out;
}

}  // namespace uab
