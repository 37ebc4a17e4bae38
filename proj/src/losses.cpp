#include "spoofbench/losses.hpp"

#include <cmath>
#include <string>

#include "spoofbench/error.hpp"

namespace spoofbench {

CrossEntropyResult softmax_cross_entropy(const Matrix& logits, std::span<const int> labels) {
    if (logits.cols != 2) throw ShapeError("cross entropy expects 2 logits per row, got " + std::to_string(logits.cols));
    if (labels.size() != logits.rows)
        throw ShapeError("cross entropy: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(logits.rows) + " rows");
    if (!logits.all_finite()) throw ContractError("cross entropy: non-finite logits");
    for (int y : labels) {
        if (y != 0 && y != 1) throw ContractError("cross entropy: label outside {0,1}: " + std::to_string(y));
    }

    CrossEntropyResult result;
    result.logit_grad = Matrix(logits.rows, 2);
    for (std::size_t r = 0; r < logits.rows; ++r) {
        const double z0 = logits(r, 0), z1 = logits(r, 1);
        const double m = z0 > z1 ? z0 : z1;
        const double lse = m + std::log(std::exp(z0 - m) + std::exp(z1 - m));
        const double log_p0 = z0 - lse, log_p1 = z1 - lse;
        const int y = labels[r];
        result.loss -= y == 1 ? log_p1 : log_p0;
        const double p1 = std::exp(log_p1);
        // d loss_r / dz1 = p1 - y, and the two logits trade off exactly.
        result.logit_grad(r, 1) = p1 - static_cast<double>(y);
        result.logit_grad(r, 0) = static_cast<double>(y) - p1;
    }
    return result;
}

PairwiseConfusionResult pairwise_confusion(const Matrix& features, PcNormalization norm) {
    PairwiseConfusionResult result;
    result.feature_grad = Matrix(features.rows, features.cols);
    const std::size_t k = features.rows, d = features.cols;
    if (k < 2) return result;

    double raw = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double* fi = features.values.data() + i * d;
            const double* fj = features.values.data() + j * d;
            double dist_sq = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = fi[c] - fj[c];
                dist_sq += diff * diff;
            }
            raw += 2.0 * dist_sq;  // ordered pairs count (i,j) and (j,i)
        }
    }

    // d raw / d f_a = 4 * (k * f_a - sum of rows)
    std::vector<double> col_sum(d, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const double* fi = features.values.data() + i * d;
        for (std::size_t c = 0; c < d; ++c) col_sum[c] += fi[c];
    }
    const double scale = norm == PcNormalization::pair_mean
                             ? 1.0 / (static_cast<double>(k) * static_cast<double>(k - 1))
                             : 1.0;
    result.loss = raw * scale;
    for (std::size_t i = 0; i < k; ++i) {
        const double* fi = features.values.data() + i * d;
        double* gi = result.feature_grad.values.data() + i * d;
        for (std::size_t c = 0; c < d; ++c) {
            gi[c] = 4.0 * (static_cast<double>(k) * fi[c] - col_sum[c]) * scale;
        }
    }
    return result;
}

LossBreakdown combined_loss(double ce, double pc, double lambda1, double lambda2) {
    if (lambda1 < 0.0 || lambda2 < 0.0) throw ContractError("combined loss: negative weight");
    LossBreakdown out;
    out.ce = ce;
    out.pc = pc;
    out.lambda1 = lambda1;
    out.lambda2 = lambda2;
    out.total = lambda1 * pc + lambda2 * ce;
    return out;
}

}  // namespace spoofbench
