#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "glj/density.hpp"
#include "glj/params.hpp"
#include "glj/polar.hpp"

namespace glj {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

/// Order parameter samples on a polar grid plus a vector potential stored by
/// Cartesian components per node.
struct ComplexField2D {
  PolarGrid2D grid;
  std::vector<std::complex<double>> values;
  std::vector<double> ax;
  std::vector<double> ay;

  std::complex<double> at(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }
  Point node(std::size_t i, std::size_t j) const { return {grid.x(i, j), grid.y(i, j)}; }
  std::complex<double> sample(Point p) const;
};

using ComplexFunction = std::function<std::complex<double>(double x, double y)>;
using VectorFunction = std::function<Point(double x, double y)>;

ComplexField2D sample_field(const PolarGrid2D& grid, const ComplexFunction& psi,
                            const VectorFunction& potential = {});

/// tanh(|x - p| / eps) * ((x - p) / |x - p|)^degree.
std::complex<double> synthetic_vortex(Point x, Point p, double eps, int degree);

struct Ball {
  Point center;
  double radius = 0.0;
  int degree = 0;
  /// False when the ball is not contained in the open disc; degree is 0 then.
  bool inside = true;
};

struct BallCollection {
  std::vector<Ball> balls;
  /// Set by sublevel_cover when a ball had to leave the disc.
  bool clipped = false;
  /// Set by grow_balls when a ball left the disc before eta was reached.
  bool exited = false;
  /// Set by grow_balls when degrees summed through merges disagree with the
  /// windings measured on the final boundaries.
  bool degree_mismatch = false;
  std::size_t merge_events = 0;

  double total_radius() const;
  int total_abs_degree() const;
  int total_degree() const;
  bool covers(Point p) const;
  bool disjoint() const;
};

/// Degree on the grid circle r = r_row. Throws SolverError if the modulus
/// drops below 0.1 on the circle.
int winding_number(const ComplexField2D& field, std::size_t row);
/// Degree on an arbitrary circle sampled by bilinear interpolation.
int winding_number(const ComplexField2D& field, Point center, double radius,
                   std::size_t samples = 0);

/// Smallest disc containing the points (randomized incremental, fixed seed).
Ball enclosing_ball(std::vector<Point> points, std::uint64_t seed = 1);
/// Smallest disc containing two discs.
Ball enclosing_ball(const Ball& a, const Ball& b);

/// Disjoint balls covering every node with |field| <= 1 - delta, each padded
/// by the local grid spacing so that the surrounding cells are covered.
BallCollection sublevel_cover(const ComplexField2D& field, double delta, std::uint64_t seed = 1);

/// Merge-growth until the radii sum to eta. Degrees are summed through merges
/// and then recomputed on the final boundaries.
BallCollection grow_balls(const BallCollection& initial, double eta, const ComplexField2D& field);

struct LowerBoundOptions {
  double eta = 0.1;
  double alpha = 0.4;
  int n = 1;
  double C = 1.0;
};

struct BallEnergy {
  Ball ball;
  double min_u2 = 0.0;
  double bound = 0.0;
  double actual = 0.0;
};

struct LowerBoundReport {
  std::vector<BallEnergy> balls;
  double ball_bound_sum = 0.0;
  double actual_sum = 0.0;
  /// H^2 J0 + 2 pi sum_{d >= 0} [alpha min u^2 |ln eps| - 2H] d - C H |ln eps|^-n.
  double total_bound = 0.0;
};

/// u_nodal: radial density at the grid's radial nodes.
LowerBoundReport lower_bound_eval(const BallCollection& balls, std::span<const double> u_nodal,
                                  const ComplexField2D& field, double eps, double H, double J0,
                                  const LowerBoundOptions& options);

struct JacobianField {
  /// Per grid cell (radial cell c, angular j): circulation / area.
  std::vector<double> density;
  double total_mass = 0.0;
};

/// curl(A + (i phi, grad_A phi)) cell by cell from edge circulations.
JacobianField jacobian_field(const ComplexField2D& field);

struct VortexMeasure {
  /// Nodal density: 2/eps^2 times the covered fraction of the control volume.
  std::vector<double> mu;
  std::vector<Point> centers;
  double eps = 0.0;
  /// Mass of mu in each sector |theta - theta_k| < pi/n.
  std::vector<double> sector_mass;
};

struct PinnedConfiguration {
  ComplexField2D field;
  VortexMeasure measure;
  std::vector<double> u_nodal;
  std::vector<double> h_prime;
  std::vector<double> g;
  std::vector<int> windings;
  /// Largest mismatch between phase increments and the target current form on
  /// edges outside the balls B(a_k, 2 eps), relative to the largest target.
  double phase_residual = 0.0;
};

/// Radial density interpolated to the grid's radial nodes.
std::vector<double> density_on_grid(const DensityProfile& profile, const PolarGrid2D& grid);

/// n unit vortices pinned on |x| = R with the weighted London response.
PinnedConfiguration build_pinned_configuration(int n, const ModelParams& params,
                                               const DensityProfile& profile,
                                               const PolarGrid2D& grid);

/// Solves -div(u^-2 grad v) + v = load with v = 0 on the boundary.
std::vector<double> weighted_london_solve(const PolarGrid2D& grid, std::span<const double> u_nodal,
                                          std::span<const double> load);

struct InteractionEnergy {
  double primal = 0.0;
  double dual = 0.0;
  double relative_difference = 0.0;
};

/// Primal: cell-centre quadrature of u^-2 |grad h'|^2 + h'^2. Dual: sum of h' mu.
InteractionEnergy interaction_energy(const PolarGrid2D& grid, std::span<const double> u_nodal,
                                     std::span<const double> h_prime, std::span<const double> mu);

struct GridPoint {
  std::size_t row = 0;
  std::size_t column = 0;
};

/// Unit mass on the node's control volume, zero boundary values.
std::vector<double> green_column(GridPoint y, const PolarGrid2D& grid,
                                 std::span<const double> u_nodal);
std::vector<std::vector<double>> green_columns(std::span<const GridPoint> ys,
                                               const PolarGrid2D& grid,
                                               std::span<const double> u_nodal,
                                               std::size_t jobs = 1);

/// Smallest C with G(x, y) <= C (|ln|x - y|| + 1) over the grid, x != y.
double green_log_constant(const std::vector<double>& column, GridPoint y, const PolarGrid2D& grid);

}  // namespace glj
