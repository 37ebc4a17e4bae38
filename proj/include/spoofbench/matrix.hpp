#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spoofbench {

// Dense row-major matrix of doubles. All internal arithmetic is 64-bit.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major, values.size() == rows * cols

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    std::span<double> row(std::size_t r) { return {values.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }

    bool all_finite() const;
    bool same_shape(const Matrix& other) const { return rows == other.rows && cols == other.cols; }
};

bool all_finite(std::span<const double> v);

// Column-wise mean over rows; m must be nonempty.
std::vector<double> column_mean(const Matrix& m);

// Stacks a on top of b; column counts must match.
Matrix vstack(const Matrix& a, const Matrix& b);

}  // namespace spoofbench
