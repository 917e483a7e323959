#include "uab/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "uab/errors.hpp"

namespace uab {

namespace {

// One full cyclic sweep of Jacobi rotations over the upper triangle.
void jacobi_sweep(Matrix& a, Matrix& v) {
    const std::size_t n = a.rows;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const double apq = a(p, q);
            if (apq == 0.0) continue;
            const double app = a(p, p);
            const double aqq = a(q, q);
            // Numerically safe rotation angle (Golub & Van Loan form).
            const double tau = (aqq - app) / (2.0 * apq);
            const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                             (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;

            for (std::size_t k = 0; k < n; ++k) {
                const double akp = a(k, p);
                const double akq = a(k, q);
                a(k, p) = c * akp - s * akq;
                a(k, q) = s * akp + c * akq;
            }
            for (std::size_t k = 0; k < n; ++k) {
                const double apk = a(p, k);
                const double aqk = a(q, k);
                a(p, k) = c * apk - s * aqk;
                a(q, k) = s * apk + c * aqk;
            }
            for (std::size_t k = 0; k < n; ++k) {
                const double vkp = v(k, p);
                const double vkq = v(k, q);
                v(k, p) = c * vkp - s * vkq;
                v(k, q) = s * vkp + c * vkq;
            }
        }
    }
}

double off_diagonal_norm(const Matrix& a) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = i + 1; j < a.cols; ++j) sq += a(i, j) * a(i, j);
    return std::sqrt(2.0 * sq);
}

double frobenius_norm(const Matrix& a) {
    double sq = 0.0;
    for (double x : a.data) sq += x * x;
    return std::sqrt(sq);
}

}  // namespace

EigenDecomposition jacobi_eigen(const Matrix& symmetric) {
    if (symmetric.rows != symmetric.cols)
        throw std::invalid_argument("jacobi_eigen: matrix must be square");
    const std::size_t n = symmetric.rows;
    Matrix a = symmetric;
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    const double scale = frobenius_norm(a);
    const double tol = scale > 0.0 ? 1e-14 * scale : 0.0;
    constexpr int kMaxSweeps = 64;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= tol) break;
        jacobi_sweep(a, v);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t src = order[r];
        out.values[r] = a(src, src);
        for (std::size_t k = 0; k < n; ++k) out.vectors(r, k) = v(k, src);
    }
    return out;
}

namespace {

void fix_component_sign(Matrix& components, std::size_t row) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t j = 0; j < components.cols; ++j) {
        const double mag = std::fabs(components(row, j));
        if (mag > best) {
            best = mag;
            arg = j;
        }
    }
    if (components(row, arg) < 0.0)
        for (std::size_t j = 0; j < components.cols; ++j) components(row, j) = -components(row, j);
}

// Orthonormalize `candidate` against the first `count` rows; returns false
// when it is (numerically) inside their span.
bool orthogonalize_against(std::vector<double>& candidate, const Matrix& components,
                           std::size_t count) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t r = 0; r < count; ++r) {
            double dot = 0.0;
            for (std::size_t j = 0; j < candidate.size(); ++j)
                dot += candidate[j] * components(r, j);
            for (std::size_t j = 0; j < candidate.size(); ++j)
                candidate[j] -= dot * components(r, j);
        }
    }
    double norm = 0.0;
    for (double x : candidate) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-8) return false;
    for (double& x : candidate) x /= norm;
    return true;
}

}  // namespace

PcaModel pca_fit(const Matrix& train, int n_components) {
    const std::size_t n = train.rows;
    const std::size_t d = train.cols;
    if (n_components < 1) throw std::invalid_argument("pca_fit: n_components must be >= 1");
    const auto k = static_cast<std::size_t>(n_components);
    if (n < k + 1)
        throw DataError("pca_fit: need at least " + std::to_string(k + 1) + " rows, got " +
                        std::to_string(n));
    if (d < k)
        throw DataError("pca_fit: need at least " + std::to_string(k) + " columns, got " +
                        std::to_string(d));

    PcaModel model;
    model.feature_means.assign(d, 0.0);
    model.feature_stds.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += train(i, j);
        model.feature_means[j] = sum / static_cast<double>(n);
    }
    bool any_varying = false;
    for (std::size_t j = 0; j < d; ++j) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = train(i, j) - model.feature_means[j];
            ss += delta * delta;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        // constant columns would divide by zero; they carry no signal either way
        model.feature_stds[j] = sd > 0.0 ? sd : 1.0;
        if (sd > 0.0) any_varying = true;
    }
    if (!any_varying) throw DataError("pca_fit: all columns are constant");

    Matrix z(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            z(i, j) = (train(i, j) - model.feature_means[j]) / model.feature_stds[j];

    const double inv_dof = 1.0 / static_cast<double>(n - 1);
    model.components = Matrix(k, d);
    model.explained_variance.assign(k, 0.0);

    std::size_t filled = 0;
    if (n >= d) {
        Matrix cov(d, d);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b) {
                double sum = 0.0;
                for (std::size_t i = 0; i < n; ++i) sum += z(i, a) * z(i, b);
                cov(a, b) = cov(b, a) = sum * inv_dof;
            }
        const EigenDecomposition eig = jacobi_eigen(cov);
        for (std::size_t r = 0; r < k; ++r) {
            model.explained_variance[r] = std::max(eig.values[r], 0.0);
            for (std::size_t j = 0; j < d; ++j) model.components(r, j) = eig.vectors(r, j);
        }
        filled = k;
    } else {
        // Gram route: eigenvectors u of Z Z^T / (n-1) map to components
        // Z^T u / sqrt((n-1) lambda). Only directions with clearly positive
        // variance survive; any remainder is basis-completed below.
        Matrix gram(n, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) {
                double sum = 0.0;
                for (std::size_t j = 0; j < d; ++j) sum += z(a, j) * z(b, j);
                gram(a, b) = gram(b, a) = sum * inv_dof;
            }
        const EigenDecomposition eig = jacobi_eigen(gram);
        const double cutoff = std::max(eig.values.front(), 0.0) * 1e-12;
        for (std::size_t r = 0; r < k && r < n; ++r) {
            const double lambda = eig.values[r];
            if (lambda <= cutoff) break;
            const double inv_len = 1.0 / std::sqrt(lambda * static_cast<double>(n - 1));
            for (std::size_t j = 0; j < d; ++j) {
                double sum = 0.0;
                for (std::size_t i = 0; i < n; ++i) sum += z(i, j) * eig.vectors(r, i);
                model.components(filled, j) = sum * inv_len;
            }
            model.explained_variance[filled] = lambda;
            ++filled;
        }
    }

    // Complete a rank-deficient basis with orthogonalized canonical vectors
    // so the component rows are always a full orthonormal set.
    for (std::size_t e = 0; filled < k; ++e) {
        if (e >= d)
            throw DataError("pca_fit: could not complete an orthonormal basis");
        std::vector<double> candidate(d, 0.0);
        candidate[e] = 1.0;
        if (!orthogonalize_against(candidate, model.components, filled)) continue;
        for (std::size_t j = 0; j < d; ++j) model.components(filled, j) = candidate[j];
        model.explained_variance[filled] = 0.0;
        ++filled;
    }

    for (std::size_t r = 0; r < k; ++r) fix_component_sign(model.components, r);
    return model;
}

std::vector<double> pca_project(const PcaModel& model, std::span<const double> raw) {
    const std::size_t d = model.feature_means.size();
    if (raw.size() != d)
        throw std::invalid_argument("pca_project: expected dimension " + std::to_string(d) +
                                    ", got " + std::to_string(raw.size()));
    std::vector<double> z(d, 0.0);
    for (std::size_t j = 0; j < d; ++j)
        z[j] = (raw[j] - model.feature_means[j]) / model.feature_stds[j];
    const auto k = static_cast<std::size_t>(model.n_components());
    std::vector<double> out(k, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
        double sum = 0.0;
        for (std::size_t j = 0; j < d; ++j) sum += model.components(r, j) * z[j];
        out[r] = sum;
    }
    return out;
}

Matrix pca_project(const PcaModel& model, const Matrix& rows) {
    Matrix out(rows.rows, static_cast<std::size_t>(model.n_components()));
    for (std::size_t i = 0; i < rows.rows; ++i) {
        const auto projected = pca_project(model, rows.row(i));
        std::copy(projected.begin(), projected.end(), out.row(i).begin());
    }
    return out;
}

}  // namespace uab
