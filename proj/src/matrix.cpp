#include "spoofbench/matrix.hpp"

#include <cmath>

#include "spoofbench/error.hpp"

namespace spoofbench {

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

bool Matrix::all_finite() const { return spoofbench::all_finite(values); }

std::vector<double> column_mean(const Matrix& m) {
    if (m.rows == 0) throw ContractError("column_mean of an empty matrix");
    std::vector<double> mean(m.cols, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* row = m.values.data() + r * m.cols;
        for (std::size_t c = 0; c < m.cols; ++c) mean[c] += row[c];
    }
    for (double& v : mean) v /= static_cast<double>(m.rows);
    return mean;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols) throw ShapeError("vstack: column mismatch");
    Matrix out(a.rows + b.rows, a.cols);
    std::copy(a.values.begin(), a.values.end(), out.values.begin());
    std::copy(b.values.begin(), b.values.end(), out.values.begin() + static_cast<std::ptrdiff_t>(a.values.size()));
    return out;
}

}  // namespace spoofbench
