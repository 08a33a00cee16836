#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "glj/geometry.hpp"

namespace glj {

/// Tensor grid: radial mesh nodes x n_theta uniform angles. Row 0 is the
/// origin, stored n_theta times. Nodal data is row-major: index i * n_theta + j.
struct PolarGrid2D {
  RadialMesh mesh;
  std::size_t ntheta = 0;
  double dtheta = 0.0;
  /// Control-volume area per radial row (one node of that row). The origin
  /// row holds the full origin disc area.
  std::vector<double> node_area;
  /// Midpoints between radial nodes (dual faces), size nr - 1.
  std::vector<double> rho;

  std::size_t nr() const { return mesh.size(); }
  std::size_t size() const { return nr() * ntheta; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * ntheta + (j % ntheta); }
  double r(std::size_t i) const { return mesh.nodes[i]; }
  double theta(std::size_t j) const { return dtheta * static_cast<double>(j); }
  double x(std::size_t i, std::size_t j) const;
  double y(std::size_t i, std::size_t j) const;
  /// Radial extent of the dual cell of row i.
  double dual_length(std::size_t i) const;
  /// Largest of the radial and arc spacings touching row i.
  double local_spacing(std::size_t i) const;
};

PolarGrid2D make_polar_grid(const RadialMesh& mesh, std::size_t ntheta);

/// Bilinear interpolation in (r, theta) of nodal data.
template <class T>
T interpolate_polar(const PolarGrid2D& grid, std::span<const T> v, double x, double y);

enum class Boundary { dirichlet, neumann };

/// Finite-volume operator -div(kappa grad v) + c v on the polar grid with a
/// radial coefficient, solved exactly by a real FFT in theta and one
/// tridiagonal solve per angular mode.
///
/// kappa_cell: per radial cell (radial fluxes); kappa_node: per radial row
/// (angular fluxes). Loads are integrated over control volumes; the origin
/// row's load is taken from its first entry. Dirichlet fixes v = 0 at r = 1.
/// Neumann with c = 0 pins v = 0 at the origin.
class PolarFvSolver {
 public:
  PolarFvSolver(const PolarGrid2D& grid, std::vector<double> kappa_cell,
                std::vector<double> kappa_node, double c, Boundary boundary);

  std::vector<double> solve(std::span<const double> load) const;
  /// The discrete operator applied to nodal values (load-space result).
  std::vector<double> apply(std::span<const double> v) const;
  /// Bilinear form: sum over faces of coefficient * difference^2 plus mass.
  double energy(std::span<const double> v) const;

  double radial_coefficient(std::size_t cell) const { return radial_[cell]; }
  double angular_coefficient(std::size_t row) const { return angular_[row]; }

 private:
  const PolarGrid2D* grid_;
  std::vector<double> radial_;   // per cell, per angular column
  std::vector<double> angular_;  // per row
  double c_;
  Boundary boundary_;
};

}  // namespace glj
