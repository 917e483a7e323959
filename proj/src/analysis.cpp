#include "uab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "uab/errors.hpp"

namespace uab {

double rmse(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size())
        throw std::invalid_argument("rmse: predictions/targets length mismatch");
    if (predictions.empty()) throw std::invalid_argument("rmse: empty input");
    double sq = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - targets[i];
        sq += d * d;
    }
    return std::sqrt(sq / static_cast<double>(predictions.size()));
}

double predictive_entropy(const GaussianPrediction& pred) {
    if (!(pred.sigma > 0.0))
        throw std::domain_error("predictive_entropy: sigma must be positive");
    // ln(2*pi*e)/2 + ln(sigma)
    constexpr double kHalfLog2PiE = 1.4189385332046727418;
    return kHalfLog2PiE + std::log(pred.sigma);
}

KdeCurve kde(std::span<const double> values, const KdeSpec& spec) {
    if (values.empty()) throw std::invalid_argument("kde: empty input");
    if (spec.grid_points < 16) throw std::invalid_argument("kde: grid_points must be >= 16");

    double h = 0.0;
    if (spec.bandwidth == KdeSpec::Bandwidth::fixed) {
        if (!(spec.fixed_bandwidth > 0.0))
            throw std::invalid_argument("kde: fixed bandwidth must be positive");
        h = spec.fixed_bandwidth;
    } else {
        if (values.size() < 2)
            throw std::invalid_argument("kde: scott bandwidth needs at least 2 values");
        const double sd = sample_std(values);
        if (!(sd > 0.0))
            throw std::invalid_argument("kde: zero spread, use a fixed bandwidth");
        h = sd * std::pow(static_cast<double>(values.size()), -0.2);
    }

    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it - 3.0 * h;
    const double hi = *hi_it + 3.0 * h;

    KdeCurve curve;
    curve.grid.resize(spec.grid_points);
    curve.density.resize(spec.grid_points);
    const double step = (hi - lo) / static_cast<double>(spec.grid_points - 1);
    const double norm =
        1.0 / (static_cast<double>(values.size()) * h * std::sqrt(2.0 * 3.14159265358979323846));
    for (int g = 0; g < spec.grid_points; ++g) {
        const double x = lo + step * g;
        double sum = 0.0;
        for (double v : values) {
            const double u = (x - v) / h;
            sum += std::exp(-0.5 * u * u);
        }
        curve.grid[g] = x;
        curve.density[g] = sum * norm;
    }
    return curve;
}

EvalReport multi_seed_evaluate(const std::function<double(std::uint64_t)>& run,
                               std::span<const std::uint64_t> seeds) {
    if (seeds.size() < 2)
        throw std::invalid_argument("multi_seed_evaluate: need at least 2 seeds");
    EvalReport report;
    report.seeds.assign(seeds.begin(), seeds.end());
    report.per_seed_rmse.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
        try {
            report.per_seed_rmse.push_back(run(seed));
        } catch (const std::exception& e) {
            throw TrainError("seed " + std::to_string(seed) + " failed: " + e.what());
        }
    }
    report.mean_rmse = mean(report.per_seed_rmse);
    report.std_rmse = sample_std(report.per_seed_rmse);
    return report;
}

EntropyReport make_entropy_report(const BoostedEnsemble& ens, const Dataset& test,
                                  const KdeSpec& spec) {
    EntropyReport report;
    for (const EnsembleLearner& learner : ens.learners) {
        StageEntropy stage;
        stage.label = to_string(learner.modality);
        stage.entropies.reserve(test.size());
        for (std::size_t i = 0; i < test.size(); ++i)
            stage.entropies.push_back(
                predictive_entropy(learner.net.predict(test.input_for(learner.modality, i))));
        stage.curve = kde(stage.entropies, spec);
        report.stages.push_back(std::move(stage));
    }
    return report;
}

namespace {

std::string fmt(double v, const char* format = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

void write_file_or_throw(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << content;
    if (!out) throw DataError("write failed: " + path.string());
}

constexpr const char* kStageColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                        "#d62728", "#9467bd", "#8c564b"};

struct PanelRect {
    double x0, y0, x1, y1;
};

void append_panel(std::ostringstream& svg, const PanelRect& rect, const EntropyReport& report,
                  const std::string& title, double x_lo, double x_hi, double y_hi) {
    svg << "<g>\n";
    svg << "<text x=\"" << fmt((rect.x0 + rect.x1) / 2.0, "%.1f") << "\" y=\""
        << fmt(rect.y0 - 12.0, "%.1f")
        << "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">"
        << xml_escape(title) << "</text>\n";
    // axes
    svg << "<polyline fill=\"none\" stroke=\"#333333\" stroke-width=\"1\" points=\""
        << fmt(rect.x0, "%.1f") << "," << fmt(rect.y0, "%.1f") << " " << fmt(rect.x0, "%.1f")
        << "," << fmt(rect.y1, "%.1f") << " " << fmt(rect.x1, "%.1f") << "," << fmt(rect.y1, "%.1f")
        << "\"/>\n";
    const double w = rect.x1 - rect.x0;
    const double hgt = rect.y1 - rect.y0;
    auto map_x = [&](double x) { return rect.x0 + (x - x_lo) / (x_hi - x_lo) * w; };
    auto map_y = [&](double d) { return rect.y1 - d / y_hi * hgt; };

    for (std::size_t s = 0; s < report.stages.size(); ++s) {
        const StageEntropy& stage = report.stages[s];
        svg << "<polyline fill=\"none\" stroke=\"" << kStageColors[s % 6]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t g = 0; g < stage.curve.grid.size(); ++g) {
            if (g > 0) svg << " ";
            svg << fmt(map_x(stage.curve.grid[g]), "%.2f") << ","
                << fmt(map_y(stage.curve.density[g]), "%.2f");
        }
        svg << "\"/>\n";
        // legend entry
        const double ly = rect.y0 + 16.0 + 16.0 * static_cast<double>(s);
        svg << "<line x1=\"" << fmt(rect.x1 - 120.0, "%.1f") << "\" y1=\"" << fmt(ly, "%.1f")
            << "\" x2=\"" << fmt(rect.x1 - 100.0, "%.1f") << "\" y2=\"" << fmt(ly, "%.1f")
            << "\" stroke=\"" << kStageColors[s % 6] << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fmt(rect.x1 - 94.0, "%.1f") << "\" y=\"" << fmt(ly + 4.0, "%.1f")
            << "\" font-size=\"11\" font-family=\"sans-serif\">stage " << (s + 1) << ": "
            << xml_escape(stage.label) << "</text>\n";
    }

    // tick labels: x extremes and y maximum
    svg << "<text x=\"" << fmt(rect.x0, "%.1f") << "\" y=\"" << fmt(rect.y1 + 16.0, "%.1f")
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
        << fmt(x_lo, "%.2f") << "</text>\n";
    svg << "<text x=\"" << fmt(rect.x1, "%.1f") << "\" y=\"" << fmt(rect.y1 + 16.0, "%.1f")
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
        << fmt(x_hi, "%.2f") << "</text>\n";
    svg << "<text x=\"" << fmt(rect.x0 - 6.0, "%.1f") << "\" y=\"" << fmt(rect.y0 + 4.0, "%.1f")
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
        << fmt(y_hi, "%.2f") << "</text>\n";
    svg << "<text x=\"" << fmt((rect.x0 + rect.x1) / 2.0, "%.1f") << "\" y=\""
        << fmt(rect.y1 + 34.0, "%.1f")
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
        << "predictive entropy (nats)</text>\n";
    svg << "</g>\n";
}

}  // namespace

void write_results_csv(std::span<const MethodResult> rows, const std::string& config_echo,
                       const std::filesystem::path& path) {
    if (rows.empty()) throw std::invalid_argument("write_results_csv: no rows");
    std::ostringstream csv;
    csv << "# config: " << config_echo << "\n";
    csv << "model,mode,fusion,mean_rmse,std_rmse";
    for (std::uint64_t seed : rows.front().report.seeds) csv << ",rmse_seed_" << seed;
    csv << "\n";
    for (const MethodResult& row : rows) {
        csv << row.model << "," << row.mode << "," << row.fusion << ","
            << fmt(row.report.mean_rmse) << "," << fmt(row.report.std_rmse);
        for (double v : row.report.per_seed_rmse) csv << "," << fmt(v);
        csv << "\n";
    }
    write_file_or_throw(path, csv.str());
}

void write_entropy_svg(const EntropyReport& vanilla, const EntropyReport& ua,
                       const std::string& config_echo, const std::filesystem::path& path) {
    if (vanilla.stages.empty() || ua.stages.empty())
        throw std::invalid_argument("write_entropy_svg: empty report");

    double x_lo = vanilla.stages.front().curve.grid.front();
    double x_hi = x_lo;
    double y_hi = 0.0;
    for (const EntropyReport* report : {&vanilla, &ua}) {
        for (const StageEntropy& stage : report->stages) {
            x_lo = std::min(x_lo, stage.curve.grid.front());
            x_hi = std::max(x_hi, stage.curve.grid.back());
            for (double d : stage.curve.density) y_hi = std::max(y_hi, d);
        }
    }
    if (y_hi <= 0.0) y_hi = 1.0;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"420\" "
           "viewBox=\"0 0 960 420\">\n";
    svg << "<desc>" << xml_escape(config_echo) << "</desc>\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"960\" height=\"420\" fill=\"#ffffff\"/>\n";
    append_panel(svg, {70.0, 50.0, 460.0, 360.0}, vanilla, "vanilla boosting", x_lo, x_hi, y_hi);
    append_panel(svg, {560.0, 50.0, 950.0, 360.0}, ua, "uncertainty-aware boosting", x_lo, x_hi,
                 y_hi);
    svg << "</svg>\n";
    write_file_or_throw(path, svg.str());
}

void emit_reports(std::span<const MethodResult> rows, const EntropyReport& vanilla,
                  const EntropyReport& ua, const std::string& config_echo,
                  const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_results_csv(rows, config_echo, out_dir / "results.csv");
    write_entropy_svg(vanilla, ua, config_echo, out_dir / "entropy.svg");
}

}  // namespace uab
