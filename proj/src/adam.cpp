#include "spoofbench/adam.hpp"

#include <cmath>
#include <string>

#include "spoofbench/error.hpp"

namespace spoofbench {

AdamOptimizer::AdamOptimizer(AdamConfig cfg, std::span<const std::size_t> block_sizes) : cfg_(cfg) {
    first_moment_.reserve(block_sizes.size());
    second_moment_.reserve(block_sizes.size());
    for (std::size_t n : block_sizes) {
        first_moment_.emplace_back(n, 0.0);
        second_moment_.emplace_back(n, 0.0);
    }
}

void AdamOptimizer::step(std::span<const std::span<double>> params, std::span<const std::span<const double>> grads) {
    if (params.size() != first_moment_.size() || grads.size() != first_moment_.size())
        throw ShapeError("optimizer step: block count does not match registered parameters");
    for (std::size_t b = 0; b < params.size(); ++b) {
        if (params[b].size() != first_moment_[b].size() || grads[b].size() != first_moment_[b].size())
            throw ShapeError("optimizer step: block " + std::to_string(b) + " size mismatch");
        for (double g : grads[b]) {
            if (!std::isfinite(g))
                throw TrainingError("non-finite gradient in parameter block " + std::to_string(b));
        }
    }

    ++step_;
    const double bias1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double bias2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    for (std::size_t b = 0; b < params.size(); ++b) {
        auto& m = first_moment_[b];
        auto& v = second_moment_[b];
        auto p = params[b];
        auto g = grads[b];
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
            v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bias1;
            const double v_hat = v[i] / bias2;
            p[i] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
        }
    }
}

}  // namespace spoofbench
