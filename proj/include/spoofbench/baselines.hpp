#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "spoofbench/matrix.hpp"

namespace spoofbench {

// One-class comparison models. Every score_* function uses the same
// orientation as the trainer: higher = more bonafide, so the evaluator never
// needs model-specific flags.

struct MahalanobisModel {
    std::vector<double> mean;
    Matrix covariance;   // regularized sample covariance
    Matrix chol_lower;   // Cholesky factor of `covariance`
};

// Sample mean and covariance with epsilon*I regularization,
// epsilon = 1e-6 * trace / d. Needs at least two samples.
MahalanobisModel fit_mahalanobis(const Matrix& train);

// Squared Mahalanobis distance via the cached factorization.
double mahalanobis_sq(const MahalanobisModel& model, std::span<const double> x);

struct GmmModel {
    std::size_t components = 0;
    std::vector<double> weights;   // simplex
    Matrix means;                  // K x d
    Matrix variances;              // K x d diagonal covariances, floored
    std::vector<double> ll_trace;  // total log-likelihood per EM iteration of the winning restart
};

struct EmConfig {
    std::size_t max_iterations = 200;
    double tolerance = 1e-6;     // stop when the log-likelihood gain drops below this
    std::size_t restarts = 5;
    double variance_floor = 1e-6;
    std::uint64_t seed = 1;
};

// Diagonal-covariance EM, best of `restarts` seeded runs. Means start from
// distance-weighted draws of data points, weights uniform, variances at the
// per-dimension data variance.
GmmModel fit_gmm(const Matrix& train, std::size_t components, const EmConfig& cfg);

double gmm_log_density(const GmmModel& model, std::span<const double> x);

struct SgdConfig {
    std::size_t iterations = 2000;
    std::uint64_t seed = 1;
};

struct LinearOcSvmModel {
    std::vector<double> weight;
    double rho = 0.0;
    double nu = 0.1;
};

// Linear one-class SVM primal, minimized by subgradient descent with the
// offset profiled in closed form each iteration:
//   0.5*||w||^2 - rho + 1/(nu*n) * sum max(0, rho - w.x_i)
LinearOcSvmModel fit_linear_ocsvm(const Matrix& train, double nu, const SgdConfig& cfg);

double ocsvm_objective(const LinearOcSvmModel& model, const Matrix& train);

struct LinearSvddModel {
    std::vector<double> center;
    double radius = 0.0;  // smallest radius containing all training points around `center`
    double nu = 0.1;
};

// Linear SVDD: the center minimizes
//   R^2 + 1/(nu*n) * sum max(0, ||x_i - c||^2 - R^2)
// with R^2 profiled per iteration; the reported radius is the containment
// radius max_i ||x_i - c||, matching the enclosing-sphere reading.
LinearSvddModel fit_linear_svdd(const Matrix& train, double nu, const SgdConfig& cfg);

double svdd_objective(std::span<const double> center, double radius_sq, double nu, const Matrix& train);

using BaselineModel = std::variant<MahalanobisModel, GmmModel, LinearOcSvmModel, LinearSvddModel>;

// Bonafideness scores: MD -> -distance^2, GMM -> log-likelihood,
// OC-SVM -> w.x - rho, SVDD -> -||x - c||^2.
std::vector<double> baseline_score(const BaselineModel& model, const Matrix& samples);

}  // namespace spoofbench
