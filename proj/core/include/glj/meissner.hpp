#pragma once

#include <span>
#include <vector>

#include "glj/density.hpp"

namespace glj {

/// Solution of the weighted London problem. h is nodal with h(1) = 1; the
/// optimal potential q = (1/u^2) h' lives on cells.
struct LondonField {
  std::vector<double> h;
  std::vector<double> q;
  double j0_energy = 0.0;  // sum q^2 U + sum w (curl q - 1)^2
  double j0_h_form = 0.0;  // sum (1/u^2) h'^2 + (h - 1)^2
  double weighted_gradient_sup = 0.0;  // max |h'|/u^2 = max |q|
  double c0 = 0.0;                     // ||h - 1||_inf = 1 - h(0)
  double origin_curvature = 0.0;       // 2 (h_1 - h_0) / dr^2
  double origin_target = 0.0;          // u(0)^2 h(0) / 2
};

enum class LinearSolver { thomas, sparse_lu };

LondonField solve_london(const DensityProfile& profile,
                         LinearSolver solver = LinearSolver::thomas);

/// Per-cell u^2 mass: half_left u_L^2 + half_right u_R^2.
std::vector<double> cell_u2_mass(const FvWeights& w, std::span<const double> u);

/// Discrete curl of a tangential potential g given on cells, per node.
/// The value at r = 1 uses the last cell's g on the outer face; energies skip it.
std::vector<double> discrete_curl(const FvWeights& w, std::span<const double> g);

/// Discrete value of the Meissner functional at a trial potential on cells:
/// sum g^2 U + sum_{i<n} w (curl g - 1)^2.
double london_functional(const DensityProfile& profile, std::span<const double> g);

struct MeissnerEnergies {
  double j0 = 0.0;
  double m0 = 0.0;
};

MeissnerEnergies meissner_energies(const DensityProfile& profile, const LondonField& field,
                                   double H);

/// Largest violation of q_c <= sum_{i<=c} h_i (rho_i - rho_{i-1}), the
/// integrated bound on h'/u^2 (<= 0 when it holds).
double gradient_integral_bound_violation(const DensityProfile& profile, const LondonField& field);

}  // namespace glj
