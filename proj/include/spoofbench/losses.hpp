#pragma once

#include <span>

#include "spoofbench/matrix.hpp"

namespace spoofbench {

struct CrossEntropyResult {
    double loss = 0.0;
    Matrix logit_grad;  // same shape as the logits
};

// Two-class softmax cross-entropy, summed over rows (not averaged). Labels use
// the {0 = bonafide, 1 = pseudo-negative} coding; row i's probability of class
// 1 plays the role of p_i. Softmax and log are fused through log-sum-exp with
// max subtraction, so saturated logits stay finite.
CrossEntropyResult softmax_cross_entropy(const Matrix& logits, std::span<const int> labels);

enum class PcNormalization {
    pair_mean,    // divide the raw pair sum by k*(k-1)
    literal_sum,  // the raw sum over ordered pairs
};

struct PairwiseConfusionResult {
    double loss = 0.0;
    Matrix feature_grad;  // same shape as the features
};

// Sum over ordered pairs (i, j != i) of ||f_i - f_j||^2 across the batch. The
// raw sum grows as k^2, which would make its loss weight depend on batch size,
// so the default divides by k*(k-1) (the mean over ordered pairs);
// literal_sum keeps the plain sum for fidelity runs. Batches with fewer than
// two rows have no pairs and return 0 with a zero gradient.
PairwiseConfusionResult pairwise_confusion(const Matrix& features,
                                           PcNormalization norm = PcNormalization::pair_mean);

struct LossBreakdown {
    double ce = 0.0;
    double pc = 0.0;
    double total = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

// total = lambda1 * pc + lambda2 * ce
LossBreakdown combined_loss(double ce, double pc, double lambda1, double lambda2);

}  // namespace spoofbench
