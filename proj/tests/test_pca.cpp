#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pca_oracle.hpp"
#include "uab/errors.hpp"
#include "uab/pca.hpp"
#include "uab/rng.hpp"

using namespace uab;
using uab::testing::max_principal_angle;
using uab::testing::pca_oracle;
using OracleResult = uab::testing::PcaOracleResult;

namespace {

Matrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(n, d);
    for (double& v : m.data) v = rng.uniform(-2.0, 2.0);
    return m;
}

}  // namespace

TEST_CASE("data on a single line has one positive variance direction") {
    Rng rng(3);
    Matrix m(30, 5);
    std::vector<double> direction{0.2, -0.5, 1.0, 0.7, -0.1};
    for (std::size_t i = 0; i < 30; ++i) {
        const double t = rng.uniform(-3.0, 3.0);
        for (std::size_t j = 0; j < 5; ++j) m(i, j) = 4.0 + t * direction[j];
    }
    const PcaModel model = pca_fit(m, 5);
    CHECK(model.explained_variance[0] > 1.0);
    for (int r = 1; r < 5; ++r) CHECK(std::fabs(model.explained_variance[r]) < 1e-10);
}

TEST_CASE("component rows are orthonormal") {
    const PcaModel model = pca_fit(random_matrix(60, 30, 8), 21);
    for (int a = 0; a < 21; ++a)
        for (int b = a; b < 21; ++b) {
            double dot = 0.0;
            for (std::size_t j = 0; j < 30; ++j)
                dot += model.components(a, j) * model.components(b, j);
            CHECK(std::fabs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
        }
}

TEST_CASE("covariance route agrees with the dense eigensolver oracle") {
    const Matrix data = random_matrix(200, 50, 42);
    const PcaModel model = pca_fit(data, 21);
    const OracleResult oracle = pca_oracle(data, 21);

    for (int r = 0; r < 21; ++r)
        CHECK(std::fabs(model.explained_variance[r] - oracle.eigenvalues[r]) < 1e-6);
    CHECK(max_principal_angle(model.components, oracle.components) < 1e-6);

    // projecting the fit matrix reproduces the explained variances
    const Matrix scores = pca_project(model, data);
    for (int r = 0; r < 21; ++r) {
        std::vector<double> column(scores.rows);
        for (std::size_t i = 0; i < scores.rows; ++i) column[i] = scores(i, r);
        const double var = sample_std(column) * sample_std(column);
        CHECK(std::fabs(var - model.explained_variance[r]) < 1e-6);
    }
}

TEST_CASE("gram route (N < D) agrees with the dense oracle") {
    const Matrix data = random_matrix(24, 40, 77);
    const PcaModel model = pca_fit(data, 21);
    const OracleResult oracle = pca_oracle(data, 21);
    for (int r = 0; r < 21; ++r)
        CHECK(std::fabs(model.explained_variance[r] - oracle.eigenvalues[r]) < 1e-6);
    CHECK(max_principal_angle(model.components, oracle.components) < 1e-6);
}

TEST_CASE("projecting the feature means gives the zero vector") {
    const Matrix data = random_matrix(40, 25, 5);
    const PcaModel model = pca_fit(data, 21);
    const auto projected = pca_project(model, model.feature_means);
    for (double v : projected) CHECK(std::fabs(v) < 1e-12);
}

TEST_CASE("identical inputs project identically") {
    const Matrix data = random_matrix(40, 25, 6);
    const PcaModel model = pca_fit(data, 21);
    const auto a = pca_project(model, data.row(7));
    const auto b = pca_project(model, data.row(7));
    CHECK(a == b);
}

TEST_CASE("full component count reconstructs standardized data") {
    const Matrix data = random_matrix(50, 8, 13);
    const PcaModel model = pca_fit(data, 8);
    for (std::size_t i = 0; i < data.rows; ++i) {
        const auto scores = pca_project(model, data.row(i));
        for (std::size_t j = 0; j < 8; ++j) {
            double rebuilt = 0.0;
            for (int r = 0; r < 8; ++r) rebuilt += scores[r] * model.components(r, j);
            const double z = (data(i, j) - model.feature_means[j]) / model.feature_stds[j];
            CHECK(std::fabs(rebuilt - z) < 1e-8);
        }
    }
}

TEST_CASE("top-k variance beats random orthonormal projections") {
    const Matrix data = random_matrix(80, 6, 99);
    const int k = 3;
    const PcaModel model = pca_fit(data, k);
    const double best = model.explained_variance[0] + model.explained_variance[1] +
                        model.explained_variance[2];

    // standardized data, as the model sees it
    Matrix z(data.rows, data.cols);
    for (std::size_t i = 0; i < data.rows; ++i)
        for (std::size_t j = 0; j < data.cols; ++j)
            z(i, j) = (data(i, j) - model.feature_means[j]) / model.feature_stds[j];

    Rng rng(123);
    for (int trial = 0; trial < 20; ++trial) {
        // random basis via Gram-Schmidt on Gaussian vectors
        Matrix basis(k, data.cols);
        for (int r = 0; r < k; ++r) {
            std::vector<double> v(data.cols);
            for (double& x : v) x = rng.normal();
            for (int prev = 0; prev < r; ++prev) {
                double dot = 0.0;
                for (std::size_t j = 0; j < data.cols; ++j) dot += v[j] * basis(prev, j);
                for (std::size_t j = 0; j < data.cols; ++j) v[j] -= dot * basis(prev, j);
            }
            double norm = 0.0;
            for (double x : v) norm += x * x;
            norm = std::sqrt(norm);
            for (std::size_t j = 0; j < data.cols; ++j) basis(r, j) = v[j] / norm;
        }
        double captured = 0.0;
        for (int r = 0; r < k; ++r) {
            std::vector<double> scores(z.rows, 0.0);
            for (std::size_t i = 0; i < z.rows; ++i)
                for (std::size_t j = 0; j < z.cols; ++j) scores[i] += basis(r, j) * z(i, j);
            const double sd = sample_std(scores);
            captured += sd * sd;
        }
        CHECK(captured <= best + 1e-9);
    }
}

TEST_CASE("pca error paths") {
    CHECK_THROWS_AS(pca_fit(random_matrix(21, 30, 1), 21), DataError);  // too few rows
    CHECK_THROWS_AS(pca_fit(random_matrix(40, 20, 1), 21), DataError);  // too few columns

    Matrix constant(25, 22);
    for (double& v : constant.data) v = 3.0;
    CHECK_THROWS_AS(pca_fit(constant, 21), DataError);

    const PcaModel model = pca_fit(random_matrix(40, 25, 2), 21);
    CHECK_THROWS_AS(pca_project(model, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("constant columns are tolerated when others vary") {
    Matrix m = random_matrix(40, 24, 11);
    for (std::size_t i = 0; i < m.rows; ++i) m(i, 3) = 9.0;
    const PcaModel model = pca_fit(m, 21);
    CHECK(model.feature_stds[3] == 1.0);
    // the constant column contributes nothing after standardization
    for (int r = 0; r < 21; ++r) CHECK(std::fabs(model.components(r, 3)) < 1e-9);
}
