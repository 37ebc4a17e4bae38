#include "spoofbench/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace spoofbench {

double max_relative_gradient_error(const LossWithGrad& loss_fn, std::span<double> point, double step) {
    std::vector<double> analytic(point.size(), 0.0);
    std::vector<double> scratch(point.size(), 0.0);
    const double base = loss_fn(point, analytic);
    if (!std::isfinite(base)) return std::numeric_limits<double>::infinity();

    double worst = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
        const double saved = point[i];
        point[i] = saved + step;
        const double plus = loss_fn(point, scratch);
        point[i] = saved - step;
        const double minus = loss_fn(point, scratch);
        point[i] = saved;
        const double numeric = (plus - minus) / (2.0 * step);
        if (!std::isfinite(numeric) || !std::isfinite(analytic[i]))
            return std::numeric_limits<double>::infinity();
        const double denom = std::max({std::fabs(analytic[i]), std::fabs(numeric), 1e-8});
        worst = std::max(worst, std::fabs(analytic[i] - numeric) / denom);
    }
    return worst;
}

}  // namespace spoofbench
