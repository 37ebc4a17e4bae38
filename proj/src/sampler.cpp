#include "spoofbench/sampler.hpp"

#include <string>

#include "spoofbench/error.hpp"

namespace spoofbench {

std::vector<double> update_running_mean(RunningMeanState& state, const Matrix& batch_features) {
    if (batch_features.rows == 0) throw ContractError("running mean update with an empty batch");
    if (!batch_features.all_finite()) throw ContractError("running mean update with non-finite features");
    if (state.initialized && state.mu_old.size() != batch_features.cols)
        throw ShapeError("running mean dimension changed from " + std::to_string(state.mu_old.size()) + " to " +
                         std::to_string(batch_features.cols));

    std::vector<double> mu_new = column_mean(batch_features);
    if (!state.initialized) {
        state.mu_old = mu_new;
        state.initialized = true;
        return mu_new;
    }
    for (std::size_t j = 0; j < mu_new.size(); ++j) {
        state.mu_old[j] = state.alpha * state.mu_old[j] + (1.0 - state.alpha) * mu_new[j];
    }
    return state.mu_old;
}

Matrix sample_pseudo_negatives(std::span<const double> mu_star, const SamplerConfig& cfg, Rng& rng) {
    if (cfg.sigma <= 0.0) throw ConfigError("pseudo-negative sigma must be > 0");
    if (cfg.batch == 0) throw ConfigError("pseudo-negative batch must be >= 1");
    if (cfg.dim != mu_star.size())
        throw ConfigError("sampler dim " + std::to_string(cfg.dim) + " does not match center length " +
                          std::to_string(mu_star.size()));

    Matrix out(cfg.batch, cfg.dim);
    for (std::size_t r = 0; r < cfg.batch; ++r) {
        double* row = out.values.data() + r * cfg.dim;
        for (std::size_t j = 0; j < cfg.dim; ++j) row[j] = rng.normal(mu_star[j], cfg.sigma);
    }
    return out;
}

}  // namespace spoofbench
