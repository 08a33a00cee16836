#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "glj/geometry.hpp"

namespace glj {

/// Finite-volume weights on a radial mesh, all carrying the 2*pi*r factor.
/// Cell c spans nodes c and c+1; the left/right halves are split at the midpoint.
struct FvWeights {
  std::vector<double> dual;        // per node: area of the dual annulus
  std::vector<double> stiffness;   // per cell: 2 pi rho / dr
  std::vector<double> half_left;   // per cell: area of [r_c, rho_c]
  std::vector<double> half_right;  // per cell: area of [rho_c, r_{c+1}]
  std::vector<double> rho;         // per cell midpoint
  std::vector<char> normal;        // per cell: 1 inside the junction

  std::size_t cells() const { return stiffness.size(); }
  double cell_area(std::size_t c) const { return half_left[c] + half_right[c]; }
};

FvWeights fv_weights(const RadialMesh& mesh, const JunctionGeometry& g);

enum class Side { left, right };

/// Second-order one-sided derivative at a node using the node and its two
/// neighbours on the given side.
double one_sided_derivative(const RadialMesh& mesh, std::span<const double> v, std::size_t node,
                            Side side);

/// Piecewise-linear interpolation of nodal values.
double interpolate(const RadialMesh& mesh, std::span<const double> v, double r);

/// Nodal derivative: centered three-point on interior nodes, zero at the
/// origin, one-sided at r = 1.
std::vector<double> nodal_derivative(const RadialMesh& mesh, std::span<const double> v);

}  // namespace glj
