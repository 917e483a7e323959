#pragma once

// Dense eigendecomposition oracle for validating pca_fit, kept independent
// of the library's Jacobi/Gram implementation.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "uab/linalg.hpp"

namespace uab::testing {

struct PcaOracleResult {
    std::vector<double> eigenvalues;  // top-k, descending
    Eigen::MatrixXd components;       // k x d
};

inline PcaOracleResult pca_oracle(const Matrix& data, int k) {
    const auto n = static_cast<Eigen::Index>(data.rows);
    const auto d = static_cast<Eigen::Index>(data.cols);
    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = data(i, j);

    const Eigen::RowVectorXd mean = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - mean;
    const Eigen::RowVectorXd std_dev =
        (centered.array().square().colwise().sum() / double(n - 1)).sqrt();
    for (Eigen::Index j = 0; j < d; ++j)
        if (std_dev(j) > 0.0) centered.col(j) /= std_dev(j);

    const Eigen::MatrixXd cov = centered.transpose() * centered / double(n - 1);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);

    PcaOracleResult out;
    out.components.resize(k, d);
    for (int r = 0; r < k; ++r) {
        const Eigen::Index src = d - 1 - r;  // Eigen sorts ascending
        out.eigenvalues.push_back(solver.eigenvalues()(src));
        out.components.row(r) = solver.eigenvectors().col(src).transpose();
    }
    return out;
}

// Largest principal angle (radians) between the row spaces.
inline double max_principal_angle(const Matrix& mine, const Eigen::MatrixXd& oracle) {
    const auto k = static_cast<Eigen::Index>(mine.rows);
    const auto d = static_cast<Eigen::Index>(mine.cols);
    Eigen::MatrixXd u(k, d);
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index j = 0; j < d; ++j) u(r, j) = mine(r, j);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(u * oracle.transpose());
    double worst = 0.0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        worst = std::max(worst, std::acos(std::clamp(svd.singularValues()(i), -1.0, 1.0)));
    return worst;
}

}  // namespace uab::testing
