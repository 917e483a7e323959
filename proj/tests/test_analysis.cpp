#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <fstream>

#include "uab/analysis.hpp"
#include "uab/errors.hpp"
#include "uab/rng.hpp"

using namespace uab;

namespace {

double trapezoid(const KdeCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.grid.size(); ++i)
        area += 0.5 * (curve.density[i] + curve.density[i - 1]) *
                (curve.grid[i] - curve.grid[i - 1]);
    return area;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

}  // namespace

TEST_CASE("rmse worked values") {
    CHECK(rmse(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}) == 0.0);
    CHECK(rmse(std::vector<double>{0.0, 0.0}, std::vector<double>{3.0, 4.0}) ==
          doctest::Approx(3.5355).epsilon(1e-4));
    // constant offset c shows up as |c|
    CHECK(rmse(std::vector<double>{5.5, 3.5, 9.5}, std::vector<double>{5.0, 3.0, 9.0}) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(rmse(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("predictive entropy closed form") {
    CHECK(predictive_entropy({0.0, 1.0}) == doctest::Approx(1.418939).epsilon(1e-6));
    // doubling sigma adds ln 2
    const double h1 = predictive_entropy({5.0, 1.7});
    const double h2 = predictive_entropy({-3.0, 3.4});
    CHECK(h2 - h1 == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(predictive_entropy({0.0, 2.0}) > predictive_entropy({0.0, 1.0}));
    CHECK_THROWS_AS(predictive_entropy({0.0, 0.0}), std::domain_error);
}

TEST_CASE("entropy ranks samples exactly like sigma") {
    Rng rng(4);
    std::vector<GaussianPrediction> preds(50);
    for (auto& p : preds) p = {rng.uniform(-5.0, 5.0), rng.uniform(0.01, 6.0)};
    std::size_t argmin_sigma = 0, argmin_entropy = 0;
    for (std::size_t i = 1; i < preds.size(); ++i) {
        if (preds[i].sigma < preds[argmin_sigma].sigma) argmin_sigma = i;
        if (predictive_entropy(preds[i]) < predictive_entropy(preds[argmin_entropy]))
            argmin_entropy = i;
    }
    CHECK(argmin_sigma == argmin_entropy);
}

TEST_CASE("kde single value with fixed bandwidth peaks at the kernel height") {
    KdeSpec spec;
    spec.bandwidth = KdeSpec::Bandwidth::fixed;
    spec.fixed_bandwidth = 1.0;
    const KdeCurve curve = kde(std::vector<double>{0.0}, spec);
    double at_zero = 0.0, best_gap = 1e9;
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        if (std::fabs(curve.grid[i]) < best_gap) {
            best_gap = std::fabs(curve.grid[i]);
            at_zero = curve.density[i];
        }
    CHECK(at_zero == doctest::Approx(0.39894).epsilon(1e-3));
    CHECK(curve.grid.front() == doctest::Approx(-3.0));
    CHECK(curve.grid.back() == doctest::Approx(3.0));
}

TEST_CASE("kde of symmetric values is symmetric") {
    const std::vector<double> values{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
    const KdeCurve curve = kde(values);
    const std::size_t n = curve.density.size();
    for (std::size_t i = 0; i < n / 2; ++i)
        CHECK(curve.density[i] == doctest::Approx(curve.density[n - 1 - i]).epsilon(1e-9));
}

TEST_CASE("kde densities are non-negative and integrate close to one") {
    Rng rng(88);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> values(5 + rng.bounded(200));
        for (double& v : values) v = rng.normal() * rng.uniform(0.2, 4.0);
        const KdeCurve curve = kde(values);
        for (double d : curve.density) CHECK(d >= 0.0);
        const double integral = trapezoid(curve);
        CHECK(integral > 0.95);
        CHECK(integral < 1.05);
    }
}

TEST_CASE("kde rejects degenerate inputs") {
    CHECK_THROWS_AS(kde(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(kde(std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(kde(std::vector<double>{2.0, 2.0, 2.0}), std::invalid_argument);
    KdeSpec tiny;
    tiny.grid_points = 4;
    CHECK_THROWS_AS(kde(std::vector<double>{1.0, 2.0}, tiny), std::invalid_argument);
}

TEST_CASE("multi-seed evaluation worked values") {
    std::vector<std::uint64_t> seeds{0, 1};
    const EvalReport two =
        multi_seed_evaluate([](std::uint64_t s) { return s == 0 ? 3.0 : 5.0; }, seeds);
    CHECK(two.mean_rmse == doctest::Approx(4.0));
    CHECK(two.std_rmse == doctest::Approx(1.4142).epsilon(1e-4));

    std::vector<std::uint64_t> five{0, 1, 2, 3, 4};
    const EvalReport constant = multi_seed_evaluate([](std::uint64_t) { return 4.0; }, five);
    CHECK(constant.per_seed_rmse.size() == 5);
    CHECK(constant.mean_rmse == 4.0);
    CHECK(constant.std_rmse == 0.0);
}

TEST_CASE("multi-seed evaluation recomputes its aggregates") {
    Rng rng(6);
    std::vector<std::uint64_t> seeds{10, 20, 30, 40, 50};
    const EvalReport report =
        multi_seed_evaluate([&](std::uint64_t) { return rng.uniform(2.0, 8.0); }, seeds);
    CHECK(report.mean_rmse == doctest::Approx(mean(report.per_seed_rmse)).epsilon(1e-12));
    CHECK(report.std_rmse == doctest::Approx(sample_std(report.per_seed_rmse)).epsilon(1e-12));
    CHECK(report.seeds == seeds);
}

TEST_CASE("a failing seed is identified") {
    std::vector<std::uint64_t> seeds{1, 7, 9};
    CHECK_THROWS_WITH_AS(multi_seed_evaluate(
                             [](std::uint64_t s) -> double {
                                 if (s == 7) throw std::runtime_error("diverged");
                                 return 1.0;
                             },
                             seeds),
                         doctest::Contains("seed 7"), TrainError);
    CHECK_THROWS_AS(multi_seed_evaluate([](std::uint64_t) { return 1.0; },
                                        std::vector<std::uint64_t>{3}),
                    std::invalid_argument);
}

namespace {

EntropyReport fake_report(std::uint64_t seed, int stages) {
    Rng rng(seed);
    EntropyReport report;
    const char* labels[] = {"disfluency", "interventions", "acoustic"};
    for (int s = 0; s < stages; ++s) {
        StageEntropy stage;
        stage.label = labels[s % 3];
        for (int i = 0; i < 80; ++i) stage.entropies.push_back(1.0 + rng.uniform() + 0.3 * s);
        stage.curve = kde(stage.entropies);
        report.stages.push_back(std::move(stage));
    }
    return report;
}

}  // namespace

TEST_CASE("report emission is deterministic and carries the expected labels") {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("uab-test-reports-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);

    std::vector<MethodResult> rows;
    const std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    auto fixed = [&](double base) {
        EvalReport r;
        r.seeds = seeds;
        for (std::size_t i = 0; i < seeds.size(); ++i)
            r.per_seed_rmse.push_back(base + 0.1 * static_cast<double>(i));
        r.mean_rmse = mean(r.per_seed_rmse);
        r.std_rmse = sample_std(r.per_seed_rmse);
        return r;
    };
    rows.push_back({"disfluency", "none", "none", fixed(5.7)});
    rows.push_back({"ensemble", "vanilla", "mean", fixed(5.2)});
    rows.push_back({"ensemble", "ua", "inverse_sigma", fixed(4.9)});

    const EntropyReport vanilla = fake_report(1, 3);
    const EntropyReport ua = fake_report(2, 3);
    emit_reports(rows, vanilla, ua, "uab compare --seeds=0,1,2,3,4", dir);
    const std::string csv_once = slurp(dir / "results.csv");
    const std::string svg_once = slurp(dir / "entropy.svg");

    emit_reports(rows, vanilla, ua, "uab compare --seeds=0,1,2,3,4", dir);
    CHECK(slurp(dir / "results.csv") == csv_once);
    CHECK(slurp(dir / "entropy.svg") == svg_once);

    CHECK(count_occurrences(csv_once, "inverse_sigma") == 1);
    CHECK(csv_once.find("# config: uab compare") == 0);
    CHECK(csv_once.find("rmse_seed_4") != std::string::npos);

    // one curve per stage per panel, each with its legend entry
    CHECK(count_occurrences(svg_once, "stroke-width=\"1.5\"") == 6);
    CHECK(count_occurrences(svg_once, "stage 3: acoustic") == 2);
    CHECK(svg_once.find("vanilla boosting") != std::string::npos);
    CHECK(svg_once.find("uncertainty-aware boosting") != std::string::npos);

    std::filesystem::remove_all(dir);
}
