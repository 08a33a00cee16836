#include "glj/field.hpp"

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

constexpr double two_pi = 2.0 * std::numbers::pi;

std::size_t fi(std::size_t i) { return 2 * i; }
std::size_t gi(std::size_t c) { return 2 * c + 1; }

double pot_value(bool normal, double a, double inv_eps2, double s) {
  // s = |psi|^2
  if (normal) return a * s * inv_eps2;
  return 0.5 * (1.0 - s) * (1.0 - s) * inv_eps2;
}

// Curl on nodes 0..n-2 (the node at r = 1 carries no curl term).
double curl_at(const FvWeights& w, std::span<const double> g, std::size_t i) {
  double flux = w.rho[i] * g[i];
  if (i > 0) flux -= w.rho[i - 1] * g[i - 1];
  return two_pi * flux / w.dual[i];
}

double magnetic_term(const FvWeights& w, std::span<const double> g, double H) {
  double e = 0.0;
  for (std::size_t i = 0; i < w.cells(); ++i) {
    const double b = curl_at(w, g, i) - H;
    e += w.dual[i] * b * b;
  }
  return e;
}

}  // namespace

double vortexless_threshold(const ModelParams& p, const DensityProfile& profile) {
  return p.lambda * profile.m_eps * std::abs(std::log(p.eps));
}

double resolve_field(const ModelParams& p, const DensityProfile& profile) {
  if (p.H) return *p.H;
  return p.h_frac * vortexless_threshold(p, profile);
}

double field_energy(const DensityProfile& profile, std::span<const double> f,
                    std::span<const double> g, double H) {
  const auto& w = profile.weights;
  const double a = profile.params.a;
  const double inv_eps2 = 1.0 / (profile.params.eps * profile.params.eps);
  double e = 0.0;
  for (std::size_t c = 0; c < w.cells(); ++c) {
    const bool nrm = w.normal[c] != 0;
    const double df = f[c + 1] - f[c];
    const double sl = f[c] * f[c];
    const double sr = f[c + 1] * f[c + 1];
    e += w.stiffness[c] * df * df + g[c] * g[c] * (w.half_left[c] * sl + w.half_right[c] * sr) +
         w.half_left[c] * pot_value(nrm, a, inv_eps2, sl) +
         w.half_right[c] * pot_value(nrm, a, inv_eps2, sr);
  }
  return e + magnetic_term(w, g, H);
}

FieldState solve_field_state(const ModelParams& p, const DensityProfile& profile,
                             const LondonField& london) {
  const auto& w = profile.weights;
  const std::size_t n = w.dual.size();
  const std::size_t nc = w.cells();
  const std::size_t nx = n + nc;
  const double a = p.a;
  const double inv_eps2 = 1.0 / (p.eps * p.eps);
  const double eps2 = p.eps * p.eps;

  FieldState st;
  st.budget = vortexless_threshold(p, profile);
  st.H = resolve_field(p, profile);
  st.over_budget = st.H > st.budget;
  if (st.over_budget) {
    spdlog::warn("H = {} exceeds the vortex-less budget {}; the radial state is not guaranteed",
                 st.H, st.budget);
  }

  auto split = [&](const detail::Vec& x, std::vector<double>& f, std::vector<double>& g) {
    f.resize(n);
    g.resize(nc);
    for (std::size_t i = 0; i < n; ++i) f[i] = x[fi(i)];
    for (std::size_t c = 0; c < nc; ++c) g[c] = x[gi(c)];
  };

  double H = 0.0;
  detail::NewtonProblem pb;
  pb.size = nx;
  pb.half_bandwidth = 2;
  pb.energy = [&](const detail::Vec& x) {
    std::vector<double> f, g;
    split(x, f, g);
    return field_energy(profile, f, g, H);
  };
  pb.gradient = [&](const detail::Vec& x) {
    detail::Vec gr(nx, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
      const bool nrm = w.normal[c] != 0;
      const double fl = x[fi(c)];
      const double fr = x[fi(c + 1)];
      const double gc = x[gi(c)];
      const double flux = 2.0 * w.stiffness[c] * (fr - fl);
      const double ml = w.half_left[c];
      const double mr = w.half_right[c];
      auto dpot = [&](double v) {
        return nrm ? 2.0 * a * v * inv_eps2 : -2.0 * v * (1.0 - v * v) * inv_eps2;
      };
      gr[fi(c)] += -flux + 2.0 * gc * gc * ml * fl + ml * dpot(fl);
      gr[fi(c + 1)] += flux + 2.0 * gc * gc * mr * fr + mr * dpot(fr);
      gr[gi(c)] += 2.0 * gc * (ml * fl * fl + mr * fr * fr);
    }
    for (std::size_t i = 0; i < nc; ++i) {
      double flux = w.rho[i] * x[gi(i)];
      if (i > 0) flux -= w.rho[i - 1] * x[gi(i - 1)];
      const double beta = two_pi * flux / w.dual[i] - H;
      gr[gi(i)] += 2.0 * two_pi * w.rho[i] * beta;
      if (i > 0) gr[gi(i - 1)] -= 2.0 * two_pi * w.rho[i - 1] * beta;
    }
    return gr;
  };
  pb.hessian = [&](const detail::Vec& x, SymmetricBand& hs) {
    for (std::size_t c = 0; c < nc; ++c) {
      const bool nrm = w.normal[c] != 0;
      const double fl = x[fi(c)];
      const double fr = x[fi(c + 1)];
      const double gc = x[gi(c)];
      const double ml = w.half_left[c];
      const double mr = w.half_right[c];
      const double k2 = 2.0 * w.stiffness[c];
      auto d2pot = [&](double v) { return nrm ? 2.0 * a * inv_eps2 : (6.0 * v * v - 2.0) * inv_eps2; };
      hs.at(fi(c), fi(c)) += k2 + 2.0 * gc * gc * ml + ml * d2pot(fl);
      hs.at(fi(c + 1), fi(c + 1)) += k2 + 2.0 * gc * gc * mr + mr * d2pot(fr);
      hs.at(fi(c), fi(c + 1)) -= k2;
      hs.at(gi(c), gi(c)) += 2.0 * (ml * fl * fl + mr * fr * fr);
      hs.at(gi(c), fi(c)) += 4.0 * gc * ml * fl;
      hs.at(gi(c), fi(c + 1)) += 4.0 * gc * mr * fr;
    }
    for (std::size_t i = 0; i < nc; ++i) {
      const double ci = two_pi * w.rho[i];
      hs.at(gi(i), gi(i)) += 2.0 * ci * ci / w.dual[i];
      if (i > 0) {
        const double cm = two_pi * w.rho[i - 1];
        hs.at(gi(i - 1), gi(i - 1)) += 2.0 * cm * cm / w.dual[i];
        hs.at(gi(i), gi(i - 1)) -= 2.0 * ci * cm / w.dual[i];
      }
    }
  };
  pb.residual_scale.resize(nx);
  pb.shift_pattern.resize(nx);
  for (std::size_t i = 0; i < n; ++i) {
    pb.residual_scale[fi(i)] = eps2 / (2.0 * w.dual[i]);
    pb.shift_pattern[fi(i)] = w.dual[i] * inv_eps2;
  }
  for (std::size_t c = 0; c < nc; ++c) {
    pb.residual_scale[gi(c)] = eps2 / (2.0 * w.cell_area(c));
    pb.shift_pattern[gi(c)] = w.cell_area(c) * inv_eps2;
  }
  pb.feasible = [&](const detail::Vec& x) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(x[fi(i)] > 0.0)) return false;
    }
    return true;
  };
  pb.roundoff = [&](const detail::Vec& x) {
    detail::Vec mag(nx, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
      const double fl = std::abs(x[fi(c)]);
      const double fr = std::abs(x[fi(c + 1)]);
      const double gc = std::abs(x[gi(c)]);
      const double k2 = 2.0 * w.stiffness[c] * (fl + fr);
      const double pl = 2.0 * std::max(a, 1.0) * inv_eps2 * (fl + fl * fl * fl);
      const double pr = 2.0 * std::max(a, 1.0) * inv_eps2 * (fr + fr * fr * fr);
      mag[fi(c)] += k2 + w.half_left[c] * (2.0 * gc * gc * fl + pl);
      mag[fi(c + 1)] += k2 + w.half_right[c] * (2.0 * gc * gc * fr + pr);
      mag[gi(c)] += 2.0 * gc * (w.half_left[c] * fl * fl + w.half_right[c] * fr * fr);
    }
    for (std::size_t i = 0; i < nc; ++i) {
      double bmag = w.rho[i] * std::abs(x[gi(i)]);
      if (i > 0) bmag += w.rho[i - 1] * std::abs(x[gi(i - 1)]);
      bmag = two_pi * bmag / w.dual[i] + H;
      mag[gi(i)] += 2.0 * two_pi * w.rho[i] * bmag;
      if (i > 0) mag[gi(i - 1)] += 2.0 * two_pi * w.rho[i - 1] * bmag;
    }
    double m = 0.0;
    for (std::size_t k = 0; k < nx; ++k) m = std::max(m, mag[k] * pb.residual_scale[k]);
    return 64.0 * std::numeric_limits<double>::epsilon() * m;
  };

  // Continuation from the Meissner trial state in steps of at most budget/8.
  int steps = 1;
  if (st.H > 0.0 && st.budget > 0.0) {
    steps = std::clamp(static_cast<int>(std::ceil(8.0 * st.H / st.budget)), 1, 256);
  }
  detail::Vec x(nx);
  for (std::size_t i = 0; i < n; ++i) x[fi(i)] = profile.u[i];
  double prev_H = 0.0;
  for (int s = 1; s <= steps; ++s) {
    H = st.H * static_cast<double>(s) / static_cast<double>(steps);
    for (std::size_t c = 0; c < nc; ++c) {
      x[gi(c)] = prev_H > 0.0 ? x[gi(c)] * (H / prev_H) : H * london.q[c];
    }
    const auto out = detail::minimize_newton(pb, x, p.tol.newton_tol, p.tol.max_iterations);
    st.iterations += out.iterations;
    st.residual = out.residual;
    if (!out.converged) {
      throw SolverError("field Newton did not converge at H = " + std::to_string(H) +
                            " (residual " + fmt::format("{:.3e}", out.residual) + ")",
                        out.residual);
    }
    prev_H = H;
  }
  st.continuation_steps = steps;
  split(x, st.f, st.g);

  // With f fixed the energy is quadratic in g. Solve for the small remainder
  // p = g - H q directly: its source H q (U - Phi) avoids the cancellation in g - H q.
  if (st.H > 0.0) {
    const auto umass = cell_u2_mass(w, profile.u);
    std::vector<double> lo(nc, 0.0), di(nc, 0.0), up(nc, 0.0), rhs(nc, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
      const double Phi = w.half_left[c] * st.f[c] * st.f[c] +
                         w.half_right[c] * st.f[c + 1] * st.f[c + 1];
      const double cc = two_pi * w.rho[c];
      di[c] = Phi + cc * cc / w.dual[c];
      if (c + 1 < nc) {
        const double cn = two_pi * w.rho[c + 1];
        di[c] += cc * cc / w.dual[c + 1];
        up[c] = -cc * cn / w.dual[c + 1];
        lo[c + 1] = up[c];
      }
      rhs[c] = st.H * london.q[c] * (umass[c] - Phi);
    }
    const auto rem = solve_tridiagonal(lo, di, up, rhs);
    for (std::size_t c = 0; c < nc; ++c) st.g[c] = st.H * london.q[c] + rem[c];
  }

  st.max_excess_over_u = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    st.max_excess_over_u = std::max(st.max_excess_over_u, st.f[i] - profile.u[i]);
  }
  const auto fp = nodal_derivative(profile.mesh, st.f);
  double gb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gn = i == 0 ? 0.0 : (i == nc ? st.g[nc - 1] : 0.5 * (st.g[i - 1] + st.g[i]));
    gb = std::max(gb, std::abs(fp[i]) + st.f[i] * std::abs(gn));
  }
  st.gradient_bound = p.eps * gb;
  spdlog::debug("field eps={} H={} converged: {} iterations, {} continuation steps", p.eps, st.H,
                st.iterations, steps);
  return st;
}

EnergyBreakdown split_energy(const DensityProfile& profile, const RadialPair& pair, double H) {
  const auto& w = profile.weights;
  const auto& u = profile.u;
  const double a = profile.params.a;
  const double inv_eps2 = 1.0 / (profile.params.eps * profile.params.eps);
  const auto m = static_cast<double>(pair.winding);
  const auto& phi = pair.phi;
  const auto& g = pair.g;

  double G = 0.0;
  double F = 0.0;
  for (std::size_t c = 0; c < w.cells(); ++c) {
    const bool nrm = w.normal[c] != 0;
    const double ml = w.half_left[c];
    const double mr = w.half_right[c];
    const std::complex<double> psl = u[c] * phi[c];
    const std::complex<double> psr = u[c + 1] * phi[c + 1];
    const double tl = std::norm(phi[c]);
    const double tr = std::norm(phi[c + 1]);
    const double sl = std::norm(psl);
    const double sr = std::norm(psr);
    const double tang = m / w.rho[c] - g[c];
    const double Phi = ml * sl + mr * sr;
    G += w.stiffness[c] * std::norm(psr - psl) + tang * tang * Phi +
         ml * pot_value(nrm, a, inv_eps2, sl) + mr * pot_value(nrm, a, inv_eps2, sr);
    F += w.stiffness[c] * u[c] * u[c + 1] * std::norm(phi[c + 1] - phi[c]) + tang * tang * Phi;
    if (!nrm) {
      const double ul2 = u[c] * u[c];
      const double ur2 = u[c + 1] * u[c + 1];
      F += 0.5 * inv_eps2 *
           (ml * ul2 * ul2 * (1.0 - tl) * (1.0 - tl) + mr * ur2 * ur2 * (1.0 - tr) * (1.0 - tr));
    }
  }
  const double mag = magnetic_term(w, g, H);
  EnergyBreakdown e;
  e.total_G = G + mag;
  e.c0 = profile.c0_energy;
  e.f_functional = F + mag;
  e.split_residual = std::abs(e.total_G - e.c0 - e.f_functional);
  return e;
}

EnergyBreakdown br_decompose(const DensityProfile& profile, const LondonField& london,
                             const RadialPair& pair, double H) {
  EnergyBreakdown e = split_energy(profile, pair, H);
  const auto& w = profile.weights;
  const auto& u = profile.u;
  const double inv_eps2 = 1.0 / (profile.params.eps * profile.params.eps);
  const auto m = static_cast<double>(pair.winding);
  const auto& phi = pair.phi;
  const auto& q = london.q;
  const auto& h = london.h;
  const std::size_t nc = w.cells();
  const auto umass = cell_u2_mass(w, u);

  std::vector<double> p(nc);
  for (std::size_t c = 0; c < nc; ++c) p[c] = pair.g[c] - H * q[c];

  double t2 = 0.0;
  double t3 = 0.0;
  double t5 = 0.0;
  std::vector<double> v(nc);  // A' plus the gauge current, weighted by the Meissner mass
  for (std::size_t c = 0; c < nc; ++c) {
    const double ml = w.half_left[c];
    const double mr = w.half_right[c];
    const double tl = std::norm(phi[c]);
    const double tr = std::norm(phi[c + 1]);
    const double ul2 = u[c] * u[c];
    const double ur2 = u[c + 1] * u[c + 1];
    const double Phi = ml * ul2 * tl + mr * ur2 * tr;
    const double tang = m / w.rho[c] - p[c];
    t2 += w.stiffness[c] * u[c] * u[c + 1] * std::norm(phi[c + 1] - phi[c]) + tang * tang * Phi;
    if (w.normal[c] == 0) {
      t3 += 0.5 * inv_eps2 *
            (ml * ul2 * ul2 * (1.0 - tl) * (1.0 - tl) + mr * ur2 * ur2 * (1.0 - tr) * (1.0 - tr));
    }
    t5 += q[c] * q[c] * (Phi - umass[c]);
    v[c] = p[c] + tang * Phi / umass[c];
  }
  double t4 = 0.0;
  for (std::size_t i = 0; i < nc; ++i) {
    const double bp = curl_at(w, p, i);
    t2 += w.dual[i] * bp * bp;
    t4 += w.dual[i] * (h[i] - 1.0) * curl_at(w, v, i);
  }
  e.br_terms = {H * H * london.j0_energy, t2, t3, 2.0 * H * t4, H * H * t5};
  double sum = 0.0;
  for (double t : e.br_terms) sum += t;
  e.br_residual = std::abs(e.f_functional - sum);
  return e;
}

RadialPair pair_from_state(const FieldState& state, const DensityProfile& profile) {
  RadialPair pair;
  pair.phi.resize(state.f.size());
  for (std::size_t i = 0; i < state.f.size(); ++i) pair.phi[i] = state.f[i] / profile.u[i];
  pair.g = state.g;
  return pair;
}

EnergyBreakdown total_energy(const FieldState& state, const DensityProfile& profile,
                             const LondonField& london) {
  auto e = br_decompose(profile, london, pair_from_state(state, profile), state.H);
  // G evaluated directly on (f, g) rather than through u phi.
  e.total_G = field_energy(profile, state.f, state.g, state.H);
  e.split_residual = std::abs(e.total_G - e.c0 - e.f_functional);
  return e;
}

JunctionReport junction_report(const FieldState& state, const DensityProfile& profile) {
  const auto& mesh = profile.mesh;
  const auto& p = profile.params;
  const auto& f = state.f;
  const std::size_t i0 = mesh.inner_index;
  const std::size_t i1 = mesh.outer_index;
  if (!(f[i0] > 0.0) || !(f[i1] > 0.0)) {
    throw SolverError("order parameter vanishes on a junction interface", 0.0);
  }
  JunctionReport r;
  const double d_in = one_sided_derivative(mesh, f, i0, Side::left);
  const double d_out = one_sided_derivative(mesh, f, i1, Side::right);
  r.eps_log_jump = p.eps * (d_out / f[i1] - d_in / f[i0]);
  r.psi_jump = f[i1] - f[i0];
  const double d = profile.geometry.ell / p.eps;
  r.target_kappa = is_thin(p.regime) ? degennes_coefficient(p.a, d) : 2.0 * std::sqrt(p.a);
  r.relative_error = std::abs(r.eps_log_jump - r.target_kappa) / r.target_kappa;

  // g interpolated linearly between cell midpoints onto the interface node.
  auto g_node = [&](std::size_t i) {
    const auto& w = profile.weights;
    const double t = (mesh.nodes[i] - w.rho[i - 1]) / (w.rho[i] - w.rho[i - 1]);
    return (1.0 - t) * state.g[i - 1] + t * state.g[i];
  };
  auto circulation = [&](std::size_t i) {
    return -two_pi * mesh.nodes[i] * f[i] * f[i] * g_node(i);
  };
  r.circulation_inner = circulation(i0);
  r.circulation_outer = circulation(i1);
  r.circulation_gap = std::abs(r.circulation_outer - r.circulation_inner);

  r.x_minus = {p.eps * d_in, f[i0]};
  r.x_plus = {p.eps * d_out, f[i1]};
  const auto M = degennes_matrix(p.a, d).matrix;
  const double e0 = r.x_plus[0] - (M[0][0] * r.x_minus[0] + M[0][1] * r.x_minus[1]);
  const double e1 = r.x_plus[1] - (M[1][0] * r.x_minus[0] + M[1][1] * r.x_minus[1]);
  r.degennes_mismatch = std::sqrt(two_pi) * std::hypot(e0, e1);
  return r;
}

SmallnessReport energy_estimate_check(const DensityProfile& profile, const LondonField& london,
                                      const RadialPair& pair, double H) {
  const auto& w = profile.weights;
  const auto& mesh = profile.mesh;
  const double eps = profile.params.eps;
  const double inv_eps2 = 1.0 / (eps * eps);
  const auto m = static_cast<double>(pair.winding);
  const auto& phi = pair.phi;
  const std::size_t nc = w.cells();
  std::vector<double> p(nc);
  for (std::size_t c = 0; c < nc; ++c) p[c] = pair.g[c] - H * london.q[c];

  SmallnessReport r;
  r.m_eps = profile.m_eps;
  for (std::size_t c = 0; c < nc; ++c) {
    const double ml = w.half_left[c];
    const double mr = w.half_right[c];
    const double tl = std::norm(phi[c]);
    const double tr = std::norm(phi[c + 1]);
    const double tang = m / w.rho[c] - p[c];
    r.energy += w.stiffness[c] * std::norm(phi[c + 1] - phi[c]) + tang * tang * (ml * tl + mr * tr);
    if (w.normal[c] == 0) {
      r.energy += inv_eps2 * (ml * (1.0 - tl) * (1.0 - tl) + mr * (1.0 - tr) * (1.0 - tr));
    }
  }
  for (std::size_t i = 0; i < nc; ++i) {
    const double bp = curl_at(w, p, i);
    r.curl_potential += w.dual[i] * bp * bp;
  }
  r.energy += r.curl_potential;

  // Radial derivative of phi from the S side at both interfaces.
  std::vector<double> re(phi.size());
  std::vector<double> im(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    re[i] = phi[i].real();
    im[i] = phi[i].imag();
  }
  double sq = 0.0;
  for (auto [node, side] : {std::pair{mesh.inner_index, Side::left},
                            std::pair{mesh.outer_index, Side::right}}) {
    const double dr = one_sided_derivative(mesh, re, node, side);
    const double di = one_sided_derivative(mesh, im, node, side);
    sq += two_pi * mesh.nodes[node] * (dr * dr + di * di);
  }
  r.normal_derivative = eps * std::sqrt(sq);
  return r;
}

}  // namespace glj
