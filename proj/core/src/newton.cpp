#include "newton.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "glj/error.hpp"

namespace glj::detail {

double scaled_residual(const NewtonProblem& pb, const Vec& grad) {
  double m = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    m = std::max(m, std::abs(grad[i]) * pb.residual_scale[i]);
  }
  return m;
}

namespace {

// One damped step. Returns false when no acceptable step exists.
bool newton_step(const NewtonProblem& pb, Vec& x, Vec& grad, double& energy, double& res,
                 bool polishing) {
  const std::size_t n = pb.size;
  SymmetricBand hess(n, pb.half_bandwidth);
  double shift = 0.0;
  for (;;) {
    hess = SymmetricBand(n, pb.half_bandwidth);
    pb.hessian(x, hess);
    if (shift > 0.0) {
      Vec d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = shift * pb.shift_pattern[i];
      hess.add_diagonal(d);
    }
    if (hess.factor(0.0)) break;
    shift = shift == 0.0 ? 1e-3 : 10.0 * shift;
    if (shift > 1e8) throw SolverError("Newton: cannot regularize the Hessian", res);
  }
  Vec rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = -grad[i];
  const Vec step = hess.solve(rhs);
  double slope = 0.0;
  for (std::size_t i = 0; i < n; ++i) slope += grad[i] * step[i];

  Vec trial(n);
  double alpha = 1.0;
  for (int ls = 0; ls < (polishing ? 1 : 60); ++ls, alpha *= 0.5) {
    for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + alpha * step[i];
    if (pb.feasible && !pb.feasible(trial)) continue;
    const double e_new = pb.energy(trial);
    bool ok = !polishing && e_new <= energy + 1e-4 * alpha * slope;
    Vec g_new;
    double r_new = 0.0;
    if (!ok && e_new - energy <= 1e-13 * (1.0 + std::abs(energy))) {
      // Energy differences at round-off level: judge by the residual instead.
      g_new = pb.gradient(trial);
      r_new = scaled_residual(pb, g_new);
      ok = r_new < res;
    }
    if (!ok) continue;
    if (g_new.empty()) {
      g_new = pb.gradient(trial);
      r_new = scaled_residual(pb, g_new);
    }
    x.swap(trial);
    grad.swap(g_new);
    energy = e_new;
    res = r_new;
    spdlog::trace("newton res={:.3e} alpha={} shift={}", res, alpha, shift);
    return true;
  }
  return false;
}

}  // namespace

NewtonOutcome minimize_newton(const NewtonProblem& pb, Vec& x, double tol, int max_iterations) {
  double energy = pb.energy(x);
  Vec grad = pb.gradient(x);
  double res = scaled_residual(pb, grad);
  NewtonOutcome out;
  const double target = std::max(tol, pb.roundoff ? pb.roundoff(x) : 0.0);
  while (out.iterations < max_iterations && res > target) {
    if (!newton_step(pb, x, grad, energy, res, false)) {
      throw SolverError("Newton: line search failed", res);
    }
    ++out.iterations;
  }
  out.converged = res <= target;
  for (int k = 0; k < 2 && out.converged; ++k) {
    if (!newton_step(pb, x, grad, energy, res, true)) break;
  }
  out.residual = res;
  return out;
}

}  // namespace glj::detail
