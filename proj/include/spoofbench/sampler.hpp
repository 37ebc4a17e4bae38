#pragma once

#include <span>
#include <vector>

#include "spoofbench/matrix.hpp"
#include "spoofbench/rng.hpp"

namespace spoofbench {

// Adaptive center of the pseudo-negative Gaussian. mu_old holds the blended
// center after the most recent update; alpha is fixed for a training run.
struct RunningMeanState {
    std::vector<double> mu_old;
    double alpha = 0.8;
    bool initialized = false;
};

// Blends the previous center with the current batch mean:
//   mu_new = column mean of batch_features
//   mu*    = mu_new on the first call, alpha * mu_old + (1 - alpha) * mu_new after
// and stores mu* back into the state. The returned center is treated as a
// constant by the training graph; no gradient flows through it.
std::vector<double> update_running_mean(RunningMeanState& state, const Matrix& batch_features);

struct SamplerConfig {
    double sigma = 1.0;    // per-dimension standard deviation
    std::size_t dim = 0;   // feature dimension d
    std::size_t batch = 0; // rows to draw, k
};

// Draws cfg.batch rows, each coordinate independent Normal(mu_star[j], sigma^2).
// Deterministic for a fixed rng state.
Matrix sample_pseudo_negatives(std::span<const double> mu_star, const SamplerConfig& cfg, Rng& rng);

}  // namespace spoofbench
