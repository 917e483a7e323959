#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace uab {

// Dense row-major matrix of doubles. Deliberately minimal; the project's
// matrices are small enough that plain loops beat any abstraction tax.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }

    Matrix select_rows(std::span<const std::size_t> indices) const {
        Matrix out(indices.size(), cols);
        for (std::size_t k = 0; k < indices.size(); ++k) {
            const auto src = row(indices[k]);
            std::copy(src.begin(), src.end(), out.row(k).begin());
        }
        return out;
    }

    bool operator==(const Matrix& other) const = default;
};

double mean(std::span<const double> values);
// (n-1) convention
double sample_std(std::span<const double> values);
double pearson_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace uab
