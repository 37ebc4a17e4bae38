#pragma once

// Independent oracles used by the test suites. Everything here is written
// from scratch against the definitions, not by calling the library code it
// checks, so a library bug cannot hide behind a shared implementation.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "spoofbench/evaluation.hpp"
#include "spoofbench/matrix.hpp"
#include "spoofbench/mlp.hpp"
#include "spoofbench/trainer.hpp"

namespace oracles {

// Plain nested-loop forward pass for one dense layer batch.
inline spoofbench::Matrix naive_forward(const spoofbench::Mlp& mlp, const spoofbench::Matrix& input) {
    spoofbench::Matrix current = input;
    for (const auto& layer : mlp.layers) {
        spoofbench::Matrix next(current.rows, layer.out_dim());
        for (std::size_t r = 0; r < current.rows; ++r) {
            for (std::size_t o = 0; o < layer.out_dim(); ++o) {
                double acc = layer.bias[o];
                for (std::size_t i = 0; i < layer.in_dim(); ++i) acc += layer.weights(o, i) * current(r, i);
                if (layer.activation == spoofbench::Activation::relu && acc < 0.0) acc = 0.0;
                next(r, o) = acc;
            }
        }
        current = next;
    }
    return current;
}

// Brute-force minimum-ACER sweep: every midpoint of adjacent sorted unique
// scores plus +/- infinity, rates counted directly.
struct BruteForceBest {
    double tau = 0.0;
    double acer = 0.0;
};

inline BruteForceBest brute_force_best_acer(std::span<const spoofbench::ScoredSample> scored) {
    std::vector<double> values;
    for (const auto& s : scored) values.push_back(s.score);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<double> candidates{-std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i + 1 < values.size(); ++i) candidates.push_back((values[i] + values[i + 1]) / 2.0);
    candidates.push_back(std::numeric_limits<double>::infinity());

    BruteForceBest best;
    best.acer = std::numeric_limits<double>::infinity();
    for (double tau : candidates) {
        std::size_t attacks = 0, bonafide = 0, apc = 0, bpc = 0;
        for (const auto& s : scored) {
            if (s.label == spoofbench::Label::attack) {
                ++attacks;
                if (s.score >= tau) ++apc;
            } else {
                ++bonafide;
                if (s.score < tau) ++bpc;
            }
        }
        const double apcer = 100.0 * static_cast<double>(apc) / static_cast<double>(attacks);
        const double bpcer = 100.0 * static_cast<double>(bpc) / static_cast<double>(bonafide);
        const double acer = (apcer + bpcer) / 2.0;
        if (acer < best.acer) best = {tau, acer};
    }
    return best;
}

// Gauss-Jordan inverse for the Mahalanobis direct-solve oracle.
inline spoofbench::Matrix invert(const spoofbench::Matrix& a) {
    const std::size_t n = a.rows;
    spoofbench::Matrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = 1.0;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(aug(r, col)) > std::fabs(aug(pivot, col))) pivot = r;
        }
        if (std::fabs(aug(pivot, col)) < 1e-14) throw std::runtime_error("singular matrix in oracle inverse");
        if (pivot != col) {
            for (std::size_t j = 0; j < 2 * n; ++j) std::swap(aug(pivot, j), aug(col, j));
        }
        const double inv_p = 1.0 / aug(col, col);
        for (std::size_t j = 0; j < 2 * n; ++j) aug(col, j) *= inv_p;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = aug(r, col);
            for (std::size_t j = 0; j < 2 * n; ++j) aug(r, j) -= f * aug(col, j);
        }
    }
    spoofbench::Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

inline double quadratic_form(const spoofbench::Matrix& inv, std::span<const double> diff) {
    double acc = 0.0;
    for (std::size_t i = 0; i < inv.rows; ++i)
        for (std::size_t j = 0; j < inv.cols; ++j) acc += diff[i] * inv(i, j) * diff[j];
    return acc;
}

// Diagonal Gaussian log-pdf, written out directly.
inline double diag_gaussian_logpdf(std::span<const double> x, std::span<const double> mean, std::span<const double> var) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - mean[j];
        acc += -0.5 * std::log(2.0 * 3.14159265358979323846 * var[j]) - d * d / (2.0 * var[j]);
    }
    return acc;
}

// Smallest |pre-activation| over every relu unit touched by one objective
// evaluation. Central differences are only meaningful when no relu unit sits
// within the probe step of its kink, so FD-based tests screen evaluation
// points with this margin first.
inline double min_relu_margin(const spoofbench::SpoofModel& model, const spoofbench::Matrix& bonafide,
                              const spoofbench::Matrix& pseudo) {
    using namespace spoofbench;
    ForwardCache extractor_cache;
    const Matrix features = mlp_forward(model.extractor, bonafide, &extractor_cache);
    ForwardCache classifier_cache;
    mlp_forward(model.classifier, vstack(features, pseudo), &classifier_cache);

    double margin = std::numeric_limits<double>::infinity();
    auto scan = [&](const Mlp& mlp, const ForwardCache& cache) {
        for (std::size_t li = 0; li < mlp.layers.size(); ++li) {
            if (mlp.layers[li].activation != Activation::relu) continue;
            for (double v : cache.pre[li].values) margin = std::min(margin, std::fabs(v));
        }
    };
    scan(model.extractor, extractor_cache);
    scan(model.classifier, classifier_cache);
    return margin;
}

}  // namespace oracles
