#pragma once

#include <functional>
#include <vector>

#include "glj/linalg.hpp"

namespace glj::detail {

using Vec = std::vector<double>;

// Energy minimization by Newton with a diagonal shift on indefinite Hessians and
// an Armijo search on the energy.
struct NewtonProblem {
  std::size_t size = 0;
  std::size_t half_bandwidth = 1;
  std::function<double(const Vec&)> energy;
  std::function<Vec(const Vec&)> gradient;
  std::function<void(const Vec&, SymmetricBand&)> hessian;  // adds into a zeroed band
  Vec residual_scale;  // residual = max |grad_i| * residual_scale_i
  Vec shift_pattern;   // regularization added as tau * shift_pattern
  std::function<bool(const Vec&)> feasible;
  std::function<double(const Vec&)> roundoff;  // residual level that cannot be resolved
};

struct NewtonOutcome {
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

double scaled_residual(const NewtonProblem& pb, const Vec& grad);

/// Iterates until the residual is below max(tol, roundoff), then takes up to
/// two polishing steps while the residual keeps dropping.
NewtonOutcome minimize_newton(const NewtonProblem& pb, Vec& x, double tol, int max_iterations);

}  // namespace glj::detail
