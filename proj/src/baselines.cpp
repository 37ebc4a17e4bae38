#include "spoofbench/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "spoofbench/error.hpp"
#include "spoofbench/rng.hpp"

namespace spoofbench {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;  // log(2*pi)

// Lower-triangular Cholesky; returns false on a non-positive pivot.
bool cholesky(const Matrix& a, Matrix& lower) {
    const std::size_t d = a.rows;
    lower = Matrix(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= lower(i, k) * lower(j, k);
            if (i == j) {
                if (sum <= 0.0) return false;
                lower(i, i) = std::sqrt(sum);
            } else {
                lower(i, j) = sum / lower(j, j);
            }
        }
    }
    return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double distance_sq(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        acc += diff * diff;
    }
    return acc;
}

}  // namespace

MahalanobisModel fit_mahalanobis(const Matrix& train) {
    const std::size_t n = train.rows, d = train.cols;
    if (n < 2) throw FitError("mahalanobis fit needs at least 2 samples");

    MahalanobisModel model;
    model.mean = column_mean(train);
    model.covariance = Matrix(d, d);
    for (std::size_t r = 0; r < n; ++r) {
        const double* x = train.values.data() + r * d;
        for (std::size_t i = 0; i < d; ++i) {
            const double di = x[i] - model.mean[i];
            for (std::size_t j = 0; j <= i; ++j) {
                model.covariance(i, j) += di * (x[j] - model.mean[j]);
            }
        }
    }
    const double scale = 1.0 / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            model.covariance(i, j) *= scale;
            model.covariance(j, i) = model.covariance(i, j);
        }
    }

    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) trace += model.covariance(i, i);
    double epsilon = 1e-6 * trace / static_cast<double>(d);
    for (int attempt = 0; attempt < 8; ++attempt) {
        Matrix regularized = model.covariance;
        for (std::size_t i = 0; i < d; ++i) regularized(i, i) += epsilon;
        if (cholesky(regularized, model.chol_lower)) {
            model.covariance = regularized;
            return model;
        }
        epsilon = epsilon > 0.0 ? epsilon * 10.0 : 1e-12;
    }
    throw FitError("covariance factorization failed even after regularization");
}

double mahalanobis_sq(const MahalanobisModel& model, std::span<const double> x) {
    const std::size_t d = model.mean.size();
    if (x.size() != d) throw ShapeError("mahalanobis: sample dim mismatch");
    // Forward-substitute L z = (x - mean); distance^2 = ||z||^2.
    std::vector<double> z(d);
    for (std::size_t i = 0; i < d; ++i) {
        double sum = x[i] - model.mean[i];
        for (std::size_t k = 0; k < i; ++k) sum -= model.chol_lower(i, k) * z[k];
        z[i] = sum / model.chol_lower(i, i);
    }
    return dot(z, z);
}

namespace {

struct GmmFit {
    GmmModel model;
    double final_ll = -std::numeric_limits<double>::infinity();
};

double component_log_density(const GmmModel& model, std::size_t k, std::span<const double> x) {
    const std::size_t d = x.size();
    double acc = 0.0;
    const double* mean = model.means.values.data() + k * d;
    const double* var = model.variances.values.data() + k * d;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = x[j] - mean[j];
        acc += -0.5 * (kLogTwoPi + std::log(var[j])) - diff * diff / (2.0 * var[j]);
    }
    return acc;
}

GmmFit run_em(const Matrix& train, std::size_t components, const EmConfig& cfg, Rng& rng) {
    const std::size_t n = train.rows, d = train.cols, K = components;

    GmmFit fit;
    GmmModel& model = fit.model;
    model.components = K;
    model.weights.assign(K, 1.0 / static_cast<double>(K));
    model.means = Matrix(K, d);
    model.variances = Matrix(K, d);

    // Distance-weighted seeding of means from data points.
    std::vector<std::size_t> chosen;
    chosen.push_back(rng.below(n));
    std::vector<double> min_dist_sq(n, 0.0);
    while (chosen.size() < K) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c : chosen) best = std::min(best, distance_sq(train.row(i), train.row(c)));
            min_dist_sq[i] = best;
            total += best;
        }
        std::size_t pick = rng.below(n);
        if (total > 0.0) {
            double target = rng.uniform01() * total;
            for (std::size_t i = 0; i < n; ++i) {
                target -= min_dist_sq[i];
                if (target <= 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        chosen.push_back(pick);
    }
    for (std::size_t k = 0; k < K; ++k)
        std::copy(train.row(chosen[k]).begin(), train.row(chosen[k]).end(),
                  model.means.values.begin() + static_cast<std::ptrdiff_t>(k * d));

    const std::vector<double> data_mean = column_mean(train);
    std::vector<double> data_var(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const double* x = train.values.data() + r * d;
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = x[j] - data_mean[j];
            data_var[j] += diff * diff;
        }
    }
    for (std::size_t j = 0; j < d; ++j) data_var[j] = std::max(data_var[j] / static_cast<double>(n), cfg.variance_floor);
    for (std::size_t k = 0; k < K; ++k)
        std::copy(data_var.begin(), data_var.end(), model.variances.values.begin() + static_cast<std::ptrdiff_t>(k * d));

    Matrix resp(n, K);
    double previous_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
        // E-step in log space.
        double total_ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double row_max = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < K; ++k) {
                resp(i, k) = std::log(model.weights[k]) + component_log_density(model, k, train.row(i));
                row_max = std::max(row_max, resp(i, k));
            }
            double sum = 0.0;
            for (std::size_t k = 0; k < K; ++k) sum += std::exp(resp(i, k) - row_max);
            const double lse = row_max + std::log(sum);
            total_ll += lse;
            for (std::size_t k = 0; k < K; ++k) resp(i, k) = std::exp(resp(i, k) - lse);
        }
        model.ll_trace.push_back(total_ll);
        fit.final_ll = total_ll;
        if (total_ll - previous_ll < cfg.tolerance && iter > 0) break;
        previous_ll = total_ll;

        // M-step with floored variances; an empty component keeps its mean
        // and collapses onto the floor.
        for (std::size_t k = 0; k < K; ++k) {
            double nk = 0.0;
            for (std::size_t i = 0; i < n; ++i) nk += resp(i, k);
            model.weights[k] = nk / static_cast<double>(n);
            if (nk < 1e-12) {
                for (std::size_t j = 0; j < d; ++j) model.variances(k, j) = cfg.variance_floor;
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) {
                double m = 0.0;
                for (std::size_t i = 0; i < n; ++i) m += resp(i, k) * train(i, j);
                model.means(k, j) = m / nk;
            }
            for (std::size_t j = 0; j < d; ++j) {
                double v = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double diff = train(i, j) - model.means(k, j);
                    v += resp(i, k) * diff * diff;
                }
                model.variances(k, j) = std::max(v / nk, cfg.variance_floor);
            }
        }
    }
    return fit;
}

}  // namespace

GmmModel fit_gmm(const Matrix& train, std::size_t components, const EmConfig& cfg) {
    if (components == 0) throw FitError("gmm needs at least one component");
    if (train.rows < components)
        throw FitError("gmm fit: " + std::to_string(train.rows) + " samples for " + std::to_string(components) +
                       " components");

    Rng root(cfg.seed);
    GmmFit best;
    for (std::size_t r = 0; r < std::max<std::size_t>(cfg.restarts, 1); ++r) {
        Rng restart_rng = root.fork(r);
        GmmFit fit = run_em(train, components, cfg, restart_rng);
        if (fit.final_ll > best.final_ll) best = std::move(fit);
    }
    return best.model;
}

double gmm_log_density(const GmmModel& model, std::span<const double> x) {
    if (x.size() != model.means.cols) throw ShapeError("gmm: sample dim mismatch");
    double row_max = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(model.components);
    for (std::size_t k = 0; k < model.components; ++k) {
        terms[k] = model.weights[k] > 0.0 ? std::log(model.weights[k]) + component_log_density(model, k, x)
                                          : -std::numeric_limits<double>::infinity();
        row_max = std::max(row_max, terms[k]);
    }
    if (!std::isfinite(row_max)) return -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - row_max);
    return row_max + std::log(sum);
}

namespace {

// Largest minimizer of -rho + 1/(nu*n) * sum max(0, rho - s_i) over rho.
// The slope just below a value v is #{s_i < v}/(nu*n) - 1, so scan the
// sorted values from the top for the first one whose strictly-below count
// fits the nu*n budget. The largest minimizer keeps about nu*n points in
// violation, which is the subgradient the weight update needs to balance.
double profile_rho(std::vector<double> scores, double nu) {
    std::sort(scores.begin(), scores.end());
    const double budget = nu * static_cast<double>(scores.size());
    for (std::size_t i = scores.size(); i-- > 0;) {
        const std::size_t below = std::lower_bound(scores.begin(), scores.end(), scores[i]) - scores.begin();
        if (static_cast<double>(below) <= budget) return scores[i];
    }
    return scores.front();
}

// Smallest minimizer of s + 1/(nu*n) * sum max(0, d_i - s) over s >= 0.
double profile_radius_sq(std::vector<double> dist_sq, double nu) {
    std::sort(dist_sq.begin(), dist_sq.end());
    const double budget = nu * static_cast<double>(dist_sq.size());
    double s = 0.0;
    for (std::size_t i = 0; i < dist_sq.size(); ++i) {
        const std::size_t outside =
            dist_sq.end() - std::upper_bound(dist_sq.begin(), dist_sq.end(), s);
        if (static_cast<double>(outside) <= budget) return s;
        s = dist_sq[i];
    }
    return s;
}

}  // namespace

double ocsvm_objective(const LinearOcSvmModel& model, const Matrix& train) {
    const std::size_t n = train.rows;
    double hinge = 0.0;
    for (std::size_t i = 0; i < n; ++i) hinge += std::max(0.0, model.rho - dot(model.weight, train.row(i)));
    return 0.5 * dot(model.weight, model.weight) - model.rho + hinge / (model.nu * static_cast<double>(n));
}

LinearOcSvmModel fit_linear_ocsvm(const Matrix& train, double nu, const SgdConfig& cfg) {
    if (nu <= 0.0 || nu > 1.0) throw FitError("ocsvm: nu must lie in (0,1]");
    if (train.rows == 0) throw FitError("ocsvm: empty training set");
    const std::size_t n = train.rows, d = train.cols;

    LinearOcSvmModel model;
    model.nu = nu;
    model.weight = column_mean(train);
    if (dot(model.weight, model.weight) < 1e-20) {
        Rng rng(cfg.seed);
        for (double& w : model.weight) w = rng.normal(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
    }

    std::vector<double> scores(n);
    LinearOcSvmModel best = model;
    double best_objective = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < cfg.iterations; ++t) {
        for (std::size_t i = 0; i < n; ++i) scores[i] = dot(model.weight, train.row(i));
        model.rho = profile_rho(scores, nu);

        const double objective = ocsvm_objective(model, train);
        if (!std::isfinite(objective)) throw FitError("ocsvm: objective diverged");
        if (objective < best_objective) {
            best_objective = objective;
            best = model;
        }

        // Subgradient: w minus the mean of margin violators scaled by 1/nu.
        std::vector<double> grad = model.weight;
        const double coeff = 1.0 / (nu * static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (scores[i] < model.rho) {
                const double* x = train.values.data() + i * d;
                for (std::size_t j = 0; j < d; ++j) grad[j] -= coeff * x[j];
            }
        }
        const double eta = 1.0 / (1.0 + static_cast<double>(t));
        for (std::size_t j = 0; j < d; ++j) model.weight[j] -= eta * grad[j];
    }
    for (std::size_t i = 0; i < n; ++i) scores[i] = dot(model.weight, train.row(i));
    model.rho = profile_rho(scores, nu);
    if (ocsvm_objective(model, train) < best_objective) best = model;
    return best;
}

double svdd_objective(std::span<const double> center, double radius_sq, double nu, const Matrix& train) {
    double hinge = 0.0;
    for (std::size_t i = 0; i < train.rows; ++i)
        hinge += std::max(0.0, distance_sq(train.row(i), center) - radius_sq);
    return radius_sq + hinge / (nu * static_cast<double>(train.rows));
}

LinearSvddModel fit_linear_svdd(const Matrix& train, double nu, const SgdConfig& cfg) {
    if (nu <= 0.0 || nu > 1.0) throw FitError("svdd: nu must lie in (0,1]");
    if (train.rows == 0) throw FitError("svdd: empty training set");
    const std::size_t n = train.rows, d = train.cols;

    LinearSvddModel model;
    model.nu = nu;
    model.center = column_mean(train);

    std::vector<double> dist_sq(n);
    std::vector<double> best_center = model.center;
    double best_objective = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < cfg.iterations; ++t) {
        for (std::size_t i = 0; i < n; ++i) dist_sq[i] = distance_sq(train.row(i), model.center);
        const double s = profile_radius_sq(dist_sq, nu);

        const double objective = svdd_objective(model.center, s, nu, train);
        if (!std::isfinite(objective)) throw FitError("svdd: objective diverged");
        if (objective < best_objective) {
            best_objective = objective;
            best_center = model.center;
        }

        std::vector<double> grad(d, 0.0);
        const double coeff = 2.0 / (nu * static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (dist_sq[i] > s) {
                const double* x = train.values.data() + i * d;
                for (std::size_t j = 0; j < d; ++j) grad[j] += coeff * (model.center[j] - x[j]);
            }
        }
        const double eta = 1.0 / (2.0 + static_cast<double>(t));
        for (std::size_t j = 0; j < d; ++j) model.center[j] -= eta * grad[j];
    }
    model.center = best_center;

    double max_dist_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_dist_sq = std::max(max_dist_sq, distance_sq(train.row(i), model.center));
    model.radius = std::sqrt(max_dist_sq);
    return model;
}

std::vector<double> baseline_score(const BaselineModel& model, const Matrix& samples) {
    std::vector<double> scores(samples.rows);
    if (const auto* md = std::get_if<MahalanobisModel>(&model)) {
        for (std::size_t i = 0; i < samples.rows; ++i) scores[i] = -mahalanobis_sq(*md, samples.row(i));
    } else if (const auto* gmm = std::get_if<GmmModel>(&model)) {
        for (std::size_t i = 0; i < samples.rows; ++i) scores[i] = gmm_log_density(*gmm, samples.row(i));
    } else if (const auto* svm = std::get_if<LinearOcSvmModel>(&model)) {
        if (samples.cols != svm->weight.size()) throw ShapeError("ocsvm: sample dim mismatch");
        for (std::size_t i = 0; i < samples.rows; ++i) scores[i] = dot(svm->weight, samples.row(i)) - svm->rho;
    } else {
        const auto& svdd = std::get<LinearSvddModel>(model);
        if (samples.cols != svdd.center.size()) throw ShapeError("svdd: sample dim mismatch");
        for (std::size_t i = 0; i < samples.rows; ++i) scores[i] = -distance_sq(samples.row(i), svdd.center);
    }
    return scores;
}

}  // namespace spoofbench
