#pragma once

#include <functional>
#include <span>

namespace spoofbench {

// Loss with analytic gradients: fills grad_out (same length as x) and returns
// the scalar loss. Must be pure and deterministic in x.
using LossWithGrad = std::function<double(std::span<const double> x, std::span<double> grad_out)>;

// Central-difference verification of analytic gradients at `point`. Returns
//   max_i |analytic_i - numeric_i| / max(|analytic_i|, |numeric_i|, 1e-8).
// Any non-finite intermediate maps the result to +infinity rather than
// throwing, so callers can report it as a plain failure value.
double max_relative_gradient_error(const LossWithGrad& loss_fn, std::span<double> point, double step = 1e-5);

}  // namespace spoofbench
