#pragma once

#include <span>
#include <vector>

#include "uab/linalg.hpp"

namespace uab {

inline constexpr int kPcaComponents = 21;

// z-score statistics plus the top principal directions of the standardized
// covariance, fit on training rows only.
struct PcaModel {
    std::vector<double> feature_means;        // D
    std::vector<double> feature_stds;         // D; constant columns replaced by 1
    Matrix components;                        // k x D, rows orthonormal
    std::vector<double> explained_variance;   // k, non-increasing

    int input_dim() const { return static_cast<int>(feature_means.size()); }
    int n_components() const { return static_cast<int>(explained_variance.size()); }
};

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Eigenvalues come back descending; vectors.row(i) is the unit eigenvector
// for values[i].
struct EigenDecomposition {
    std::vector<double> values;
    Matrix vectors;
};
EigenDecomposition jacobi_eigen(const Matrix& symmetric);

// Standardize, then keep the n_components directions of highest variance.
// Uses the D x D covariance when N >= D and the N x N Gram matrix otherwise.
// Sign convention: the largest-magnitude entry of each component is positive.
// Requires rows >= n_components + 1 and cols >= n_components.
PcaModel pca_fit(const Matrix& train, int n_components = kPcaComponents);

std::vector<double> pca_project(const PcaModel& model, std::span<const double> raw);
Matrix pca_project(const PcaModel& model, const Matrix& rows);

}  // namespace uab
