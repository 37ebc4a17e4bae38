#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace spoofbench {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Adam with bias correction over a fixed set of parameter blocks. Moment
// accumulators mirror the block sizes given at construction; the step counter
// is strictly increasing.
class AdamOptimizer {
public:
    AdamOptimizer(AdamConfig cfg, std::span<const std::size_t> block_sizes);

    // One update; params[i] and grads[i] must match block i's registered size.
    // A non-finite gradient raises TrainingError naming the block.
    void step(std::span<const std::span<double>> params, std::span<const std::span<const double>> grads);

    std::int64_t step_count() const { return step_; }
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    std::vector<std::vector<double>> first_moment_;
    std::vector<std::vector<double>> second_moment_;
    std::int64_t step_ = 0;
};

}  // namespace spoofbench
