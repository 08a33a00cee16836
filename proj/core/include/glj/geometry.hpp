#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace glj {

/// Unit disc split by the annulus N = {R - ell < |x| < R + ell}.
struct JunctionGeometry {
  double R = 0.5;
  double ell = 0.01;

  double r_inner() const { return R - ell; }
  double r_outer() const { return R + ell; }
  bool in_normal(double r) const { return r > r_inner() && r < r_outer(); }

  /// Throws ConfigError unless 0 < ell < R and R + ell < 1.
  void validate() const;
};

/// ell = d * eps.
struct ThinRegime {
  double d = 1.0;
};
/// ell = c * eps * ln|ln eps|; needs eps < 1/e.
struct ThickRegime {
  double c = 1.0;
};
using ThicknessRegime = std::variant<ThinRegime, ThickRegime>;

bool is_thin(const ThicknessRegime& regime);

double thickness_for_regime(const ThicknessRegime& regime, double eps);

/// Builds and validates the geometry for a regime at a given eps.
JunctionGeometry make_geometry(const ThicknessRegime& regime, double eps, double R);

/// Signed distance to the junction interfaces: positive in S, negative in N.
/// Only the two circles |x| = R -+ ell count as the boundary of S.
double signed_distance(const JunctionGeometry& g, double r);

struct MeshGrading {
  /// Spacing at the interfaces before scaling, in units of eps.
  double interface_spacing = 0.1;
  /// Growth of the spacing per unit distance from the interfaces (ratio - 1).
  double growth = 0.1;
  /// Largest spacing before scaling.
  double max_spacing = 0.02;
  /// Global factor applied to the spacing function to meet the node target.
  double scale = 1.0;
};

/// Graded radial grid on [0, 1]. R - ell, R and R + ell are nodes.
struct RadialMesh {
  std::vector<double> nodes;
  std::size_t inner_index = 0;  // node at R - ell
  std::size_t mid_index = 0;    // node at R
  std::size_t outer_index = 0;  // node at R + ell
  MeshGrading grading;

  std::size_t size() const { return nodes.size(); }
  std::size_t cells() const { return nodes.size() - 1; }
  double spacing(std::size_t cell) const { return nodes[cell + 1] - nodes[cell]; }
  double midpoint(std::size_t cell) const { return 0.5 * (nodes[cell] + nodes[cell + 1]); }
  double max_spacing() const;
  double min_spacing() const;
  /// Largest spacing among cells touching an interface node.
  double interface_spacing() const;
  /// Cell containing r (the last cell for r == 1).
  std::size_t locate(double r) const;
};

RadialMesh build_mesh(const JunctionGeometry& g, double eps, std::size_t target_points,
                      const MeshGrading& shape = {});

}  // namespace glj
