#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "glj/discretization.hpp"
#include "glj/geometry.hpp"
#include "glj/params.hpp"

namespace glj {

/// Positive minimizer of the field-free functional on a radial mesh.
struct DensityProfile {
  ModelParams params;
  JunctionGeometry geometry;
  RadialMesh mesh;
  FvWeights weights;
  std::vector<double> u;
  double c0_energy = 0.0;
  double m_eps = 0.0;  // min u^2 over the nodes
  double newton_residual = 0.0;
  int iterations = 0;
};

struct DensityJumpReport {
  double eps_log_jump = 0.0;  // eps [u'/u] across the junction, S-side derivatives
  double u_jump = 0.0;        // u(R+l) - u(R-l)
  double u_inner = 0.0;
  double u_outer = 0.0;
  double target_kappa = 0.0;
  double relative_error = 0.0;
  /// Limit of u(R +- l) in the thin regime (profile value at the interface);
  /// zero in the thick regime.
  double interface_target = 0.0;
};

struct EigenResult {
  double lambda = 0.0;
  std::vector<double> vector;  // normalized in the dual-area inner product, positive
  int iterations = 0;
};

/// Junction-layer ansatz clipped to [0.05, 0.999].
std::vector<double> density_seed(const ModelParams& p, const JunctionGeometry& g,
                                 const RadialMesh& mesh);

/// Discrete field-free energy of a nodal profile.
double density_energy(const FvWeights& w, double a, double eps, std::span<const double> u);

/// Gradient of density_energy divided by 2 w_i / eps^2 (the scaled Euler-Lagrange residual).
std::vector<double> density_residual(const FvWeights& w, double a, double eps,
                                     std::span<const double> u);

/// Newton solve started from `seed` (or density_seed when empty).
DensityProfile solve_density(const ModelParams& p, const JunctionGeometry& g,
                             const RadialMesh& mesh, std::span<const double> seed = {});

DensityJumpReport density_jump(const DensityProfile& profile);

/// sup |u(r) - profile(t_S(r)/eps)| over nodes with |t_S| <= window.
/// Thin regime compares with U, thick with V.
double compare_to_profile(const DensityProfile& profile,
                          double window = std::numeric_limits<double>::infinity());

/// Smallest eigenvalue of -Delta + (-1/eps^2) 1_S + (a/eps^2) 1_N with natural
/// boundary conditions.
EigenResult first_eigenvalue(const ModelParams& p, const JunctionGeometry& g,
                             const RadialMesh& mesh);

/// (-|S| + a|N|) / (eps^2 |Omega|), the constant-test-function value.
double eigenvalue_constant_bound(const ModelParams& p, const JunctionGeometry& g);

}  // namespace glj
