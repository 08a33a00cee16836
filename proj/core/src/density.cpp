#include "glj/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <spdlog/spdlog.h>

#include "glj/canonical.hpp"
#include "glj/error.hpp"
#include "glj/linalg.hpp"
#include "newton.hpp"

namespace glj {
namespace {

// Potential density per unit area and its first two derivatives.
struct Potential {
  double a;
  double inv_eps2;

  double value(bool normal, double v) const {
    if (normal) return a * v * v * inv_eps2;
    const double s = 1.0 - v * v;
    return 0.5 * s * s * inv_eps2;
  }
  double first(bool normal, double v) const {
    if (normal) return 2.0 * a * v * inv_eps2;
    return -2.0 * v * (1.0 - v * v) * inv_eps2;
  }
  double second(bool normal, double v) const {
    if (normal) return 2.0 * a * inv_eps2;
    return (6.0 * v * v - 2.0) * inv_eps2;
  }
};

std::vector<double> energy_gradient(const FvWeights& w, const Potential& pot,
                                    std::span<const double> u) {
  std::vector<double> grad(u.size(), 0.0);
  for (std::size_t c = 0; c < w.cells(); ++c) {
    const bool nrm = w.normal[c] != 0;
    const double flux = 2.0 * w.stiffness[c] * (u[c + 1] - u[c]);
    grad[c] += -flux + w.half_left[c] * pot.first(nrm, u[c]);
    grad[c + 1] += flux + w.half_right[c] * pot.first(nrm, u[c + 1]);
  }
  return grad;
}

// Round-off level of the scaled gradient: the residual cannot be resolved below this.
double scaled_floor(const FvWeights& w, const Potential& pot, double eps,
                    std::span<const double> u) {
  std::vector<double> mag(u.size(), 0.0);
  for (std::size_t c = 0; c < w.cells(); ++c) {
    const bool nrm = w.normal[c] != 0;
    const double k2 = 2.0 * w.stiffness[c] * (std::abs(u[c]) + std::abs(u[c + 1]));
    mag[c] += k2 + w.half_left[c] * std::abs(pot.first(nrm, u[c]));
    mag[c + 1] += k2 + w.half_right[c] * std::abs(pot.first(nrm, u[c + 1]));
  }
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, mag[i] * eps * eps / (2.0 * w.dual[i]));
  return 64.0 * std::numeric_limits<double>::epsilon() * m;
}

}  // namespace

std::vector<double> density_seed(const ModelParams& p, const JunctionGeometry& g,
                                 const RadialMesh& mesh) {
  std::vector<double> seed(mesh.size());
  if (is_thin(p.regime)) {
    const auto k = compute_constants(p.a, g.ell / p.eps);
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      seed[i] = profile_U(k, (mesh.nodes[i] - g.R) / p.eps);
    }
  } else {
    const auto k = half_plane_constants(p.a);
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      seed[i] = profile_V(k, signed_distance(g, mesh.nodes[i]) / p.eps);
    }
  }
  for (auto& v : seed) v = std::clamp(v, 0.05, 0.999);
  return seed;
}

double density_energy(const FvWeights& w, double a, double eps, std::span<const double> u) {
  const Potential pot{a, 1.0 / (eps * eps)};
  double e = 0.0;
  for (std::size_t c = 0; c < w.cells(); ++c) {
    const bool nrm = w.normal[c] != 0;
    const double du = u[c + 1] - u[c];
    e += w.stiffness[c] * du * du + w.half_left[c] * pot.value(nrm, u[c]) +
         w.half_right[c] * pot.value(nrm, u[c + 1]);
  }
  return e;
}

std::vector<double> density_residual(const FvWeights& w, double a, double eps,
                                     std::span<const double> u) {
  auto grad = energy_gradient(w, Potential{a, 1.0 / (eps * eps)}, u);
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] *= eps * eps / (2.0 * w.dual[i]);
  return grad;
}

DensityProfile solve_density(const ModelParams& p, const JunctionGeometry& g,
                             const RadialMesh& mesh, std::span<const double> seed) {
  DensityProfile out;
  out.params = p;
  out.geometry = g;
  out.mesh = mesh;
  out.weights = fv_weights(mesh, g);
  const auto& w = out.weights;
  const Potential pot{p.a, 1.0 / (p.eps * p.eps)};
  const std::size_t n = mesh.size();

  std::vector<double> u;
  if (seed.empty()) {
    u = density_seed(p, g, mesh);
  } else {
    if (seed.size() != n) throw ConfigError("density seed has the wrong length");
    u.assign(seed.begin(), seed.end());
  }

  detail::NewtonProblem pb;
  pb.size = n;
  pb.half_bandwidth = 1;
  pb.energy = [&](const detail::Vec& v) { return density_energy(w, p.a, p.eps, v); };
  pb.gradient = [&](const detail::Vec& v) { return energy_gradient(w, pot, v); };
  pb.hessian = [&](const detail::Vec& v, SymmetricBand& hess) {
    for (std::size_t c = 0; c < w.cells(); ++c) {
      const bool nrm = w.normal[c] != 0;
      const double k2 = 2.0 * w.stiffness[c];
      hess.at(c, c) += k2 + w.half_left[c] * pot.second(nrm, v[c]);
      hess.at(c + 1, c + 1) += k2 + w.half_right[c] * pot.second(nrm, v[c + 1]);
      hess.at(c, c + 1) -= k2;
    }
  };
  pb.residual_scale.resize(n);
  pb.shift_pattern.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    pb.residual_scale[i] = p.eps * p.eps / (2.0 * w.dual[i]);
    pb.shift_pattern[i] = w.dual[i] * pot.inv_eps2;
  }
  pb.feasible = [](const detail::Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
  };
  pb.roundoff = [&](const detail::Vec& v) { return scaled_floor(w, pot, p.eps, v); };

  auto outcome = detail::minimize_newton(pb, u, p.tol.newton_tol, p.tol.max_iterations);
  if (outcome.converged && *std::max_element(u.begin(), u.end()) < 1e-3) {
    spdlog::warn("density solve reached the trivial state, restarting from the profile seed");
    u = density_seed(p, g, mesh);
    outcome = detail::minimize_newton(pb, u, p.tol.newton_tol, p.tol.max_iterations);
    if (*std::max_element(u.begin(), u.end()) < 1e-3) {
      throw SolverError("density solve converged to the trivial state", outcome.residual);
    }
  }
  if (!outcome.converged) {
    throw SolverError("density Newton did not converge in " + std::to_string(outcome.iterations) +
                          " iterations (residual " + fmt::format("{:.3e}", outcome.residual) + ")",
                      outcome.residual);
  }

  out.u = std::move(u);
  out.c0_energy = density_energy(w, p.a, p.eps, out.u);
  const double umin = *std::min_element(out.u.begin(), out.u.end());
  out.m_eps = umin * umin;
  out.newton_residual = outcome.residual;
  out.iterations = outcome.iterations;
  spdlog::debug("density eps={} converged in {} iterations, C0={:.12g}", p.eps, out.iterations,
                out.c0_energy);
  return out;
}

DensityJumpReport density_jump(const DensityProfile& profile) {
  const auto& m = profile.mesh;
  const auto& u = profile.u;
  const auto& p = profile.params;
  const std::size_t i0 = m.inner_index;
  const std::size_t i1 = m.outer_index;
  DensityJumpReport r;
  r.u_inner = u[i0];
  r.u_outer = u[i1];
  if (!(r.u_inner > 0.0) || !(r.u_outer > 0.0)) {
    throw SolverError("density vanishes on a junction interface", 0.0);
  }
  const double d_in = one_sided_derivative(m, u, i0, Side::left);
  const double d_out = one_sided_derivative(m, u, i1, Side::right);
  r.eps_log_jump = p.eps * (d_out / r.u_outer - d_in / r.u_inner);
  r.u_jump = r.u_outer - r.u_inner;
  if (is_thin(p.regime)) {
    const double d = profile.geometry.ell / p.eps;
    r.target_kappa = degennes_coefficient(p.a, d);
    r.interface_target = compute_constants(p.a, d).interface_value();
  } else {
    r.target_kappa = 2.0 * std::sqrt(p.a);
  }
  r.relative_error = std::abs(r.eps_log_jump - r.target_kappa) / r.target_kappa;
  return r;
}

double compare_to_profile(const DensityProfile& profile, double window) {
  const auto& p = profile.params;
  const auto& g = profile.geometry;
  double dev = 0.0;
  if (is_thin(p.regime)) {
    const auto k = compute_constants(p.a, g.ell / p.eps);
    for (std::size_t i = 0; i < profile.mesh.size(); ++i) {
      const double r = profile.mesh.nodes[i];
      if (std::abs(signed_distance(g, r)) > window) continue;
      dev = std::max(dev, std::abs(profile.u[i] - profile_U(k, (r - g.R) / p.eps)));
    }
  } else {
    const auto k = half_plane_constants(p.a);
    for (std::size_t i = 0; i < profile.mesh.size(); ++i) {
      const double t = signed_distance(g, profile.mesh.nodes[i]);
      if (std::abs(t) > window) continue;
      dev = std::max(dev, std::abs(profile.u[i] - profile_V(k, t / p.eps)));
    }
  }
  return dev;
}

EigenResult first_eigenvalue(const ModelParams& p, const JunctionGeometry& g,
                             const RadialMesh& mesh) {
  const auto w = fv_weights(mesh, g);
  const std::size_t n = mesh.size();
  const double inv_eps2 = 1.0 / (p.eps * p.eps);
  std::vector<double> diag(n, 0.0);
  std::vector<double> off(n - 1, 0.0);
  for (std::size_t c = 0; c < w.cells(); ++c) {
    const double v = w.normal[c] ? p.a * inv_eps2 : -inv_eps2;
    diag[c] += w.stiffness[c] + w.half_left[c] * v;
    diag[c + 1] += w.stiffness[c] + w.half_right[c] * v;
    off[c] = -w.stiffness[c];
  }
  for (std::size_t i = 0; i < n; ++i) diag[i] /= w.dual[i];
  for (std::size_t c = 0; c + 1 < n; ++c) off[c] /= std::sqrt(w.dual[c] * w.dual[c + 1]);

  auto apply = [&](const std::vector<double>& x) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = diag[i] * x[i];
      if (i > 0) y[i] += off[i - 1] * x[i - 1];
      if (i + 1 < n) y[i] += off[i] * x[i + 1];
    }
    return y;
  };
  auto shifted_solve = [&](const std::vector<double>& x, double sigma) {
    std::vector<double> d(n);
    std::vector<double> lo(n, 0.0);
    std::vector<double> up(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - sigma;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      up[i] = off[i];
      lo[i + 1] = off[i];
    }
    return solve_tridiagonal(lo, d, up, x);
  };
  auto normalize = [](std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    s = std::sqrt(s);
    for (double& v : x) v /= s;
  };
  auto rayleigh = [&](const std::vector<double>& x, double& resid) {
    const auto y = apply(x);
    double lam = 0.0;
    for (std::size_t i = 0; i < n; ++i) lam += x[i] * y[i];
    resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) resid += (y[i] - lam * x[i]) * (y[i] - lam * x[i]);
    resid = std::sqrt(resid);
    return lam;
  };

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sqrt(w.dual[i]);
  normalize(x);
  const double sigma = -inv_eps2 - 1.0;
  double resid = 0.0;
  double lam = rayleigh(x, resid);
  int it = 0;
  const int max_inverse = 20000;
  double prev = lam;
  for (; it < max_inverse; ++it) {
    x = shifted_solve(x, sigma);
    normalize(x);
    lam = rayleigh(x, resid);
    if (resid <= 1e-3 * (1.0 + std::abs(lam)) || std::abs(lam - prev) <= 1e-9 * std::abs(lam)) break;
    prev = lam;
  }
  const double tol = 1e-10 * (1.0 + std::abs(lam));
  for (int k = 0; k < 50 && resid > tol; ++k, ++it) {
    try {
      x = shifted_solve(x, lam);
    } catch (const SolverError&) {
      break;  // the shift hit an eigenvalue exactly
    }
    normalize(x);
    lam = rayleigh(x, resid);
  }
  if (resid > 1e-8 * (1.0 + std::abs(lam))) {
    throw SolverError("first eigenvalue: inverse iteration did not converge", resid);
  }
  if (sturm_count(diag, off, lam - 1e-8 * (1.0 + std::abs(lam))) != 0) {
    throw SolverError("first eigenvalue: iteration converged to an excited state", resid);
  }

  EigenResult r;
  r.lambda = lam;
  r.iterations = it;
  r.vector.resize(n);
  double sign = 0.0;
  for (std::size_t i = 0; i < n; ++i) sign += x[i];
  for (std::size_t i = 0; i < n; ++i) {
    r.vector[i] = (sign < 0.0 ? -x[i] : x[i]) / std::sqrt(w.dual[i]);
  }
  return r;
}

double eigenvalue_constant_bound(const ModelParams& p, const JunctionGeometry& g) {
  const double area_n = std::numbers::pi * (g.r_outer() * g.r_outer() - g.r_inner() * g.r_inner());
  const double area_s = std::numbers::pi - area_n;
  return (-area_s + p.a * area_n) / (p.eps * p.eps * std::numbers::pi);
}

}  // namespace glj
