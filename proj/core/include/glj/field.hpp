#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "glj/density.hpp"
#include "glj/meissner.hpp"

namespace glj {

/// Radial degree-0 state: psi = f(r), A = g(r) tau. f is nodal, g lives on cells.
struct FieldState {
  std::vector<double> f;
  std::vector<double> g;
  double H = 0.0;
  double budget = 0.0;
  bool over_budget = false;
  double residual = 0.0;
  int iterations = 0;
  int continuation_steps = 0;
  double max_excess_over_u = 0.0;  // max (f - u); <= 0 when f <= u
  double gradient_bound = 0.0;     // eps * max (|f'| + f |g|)
};

/// Radial test pair phi(r) e^{i m theta}, A = g(r) tau, for the identities.
struct RadialPair {
  std::vector<std::complex<double>> phi;  // nodal
  std::vector<double> g;                  // per cell
  int winding = 0;
};

struct EnergyBreakdown {
  double total_G = 0.0;
  double c0 = 0.0;
  double f_functional = 0.0;
  double split_residual = 0.0;  // |G - C0 - F|
  std::array<double, 5> br_terms{};
  double br_residual = 0.0;  // |F - sum of br_terms|
};

struct JunctionReport {
  double eps_log_jump = 0.0;
  double psi_jump = 0.0;
  double target_kappa = 0.0;
  double relative_error = 0.0;
  double circulation_inner = 0.0;
  double circulation_outer = 0.0;
  double circulation_gap = 0.0;
  std::array<double, 2> x_minus{};  // (eps psi'(R-l), psi(R-l))
  std::array<double, 2> x_plus{};
  double degennes_mismatch = 0.0;  // L2(S^1) norm of X+ - M X-
};

struct SmallnessReport {
  double energy = 0.0;             // covariant energy of phi relative to A'
  double curl_potential = 0.0;     // |curl A'|^2 integrated
  double normal_derivative = 0.0;  // eps || n . (grad - i A') phi ||_{L2(dN)}
  double m_eps = 0.0;
  double energy_ratio() const { return energy / (m_eps * m_eps * m_eps * m_eps); }
  double curl_ratio() const { return curl_potential / (m_eps * m_eps * m_eps * m_eps); }
};

/// lambda * m_eps * |ln eps|.
double vortexless_threshold(const ModelParams& p, const DensityProfile& profile);

/// The explicit H, or h_frac * budget when H is "auto".
double resolve_field(const ModelParams& p, const DensityProfile& profile);

/// Discrete radial energy of (f, g) at applied field H.
double field_energy(const DensityProfile& profile, std::span<const double> f,
                    std::span<const double> g, double H);

FieldState solve_field_state(const ModelParams& p, const DensityProfile& profile,
                             const LondonField& london);

/// G(u phi, A), C0 and F(phi, A) for a radial pair.
EnergyBreakdown split_energy(const DensityProfile& profile, const RadialPair& pair, double H);

/// split_energy plus the five-term decomposition relative to A' = A - H q.
EnergyBreakdown br_decompose(const DensityProfile& profile, const LondonField& london,
                             const RadialPair& pair, double H);

/// Decomposition of a solved state (phi = f/u).
EnergyBreakdown total_energy(const FieldState& state, const DensityProfile& profile,
                             const LondonField& london);

RadialPair pair_from_state(const FieldState& state, const DensityProfile& profile);

JunctionReport junction_report(const FieldState& state, const DensityProfile& profile);

SmallnessReport energy_estimate_check(const DensityProfile& profile, const LondonField& london,
                                      const RadialPair& pair, double H);

}  // namespace glj
