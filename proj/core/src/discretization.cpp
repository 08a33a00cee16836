#include "glj/discretization.hpp"

#include <algorithm>
#include <numbers>

#include "glj/error.hpp"

namespace glj {

FvWeights fv_weights(const RadialMesh& mesh, const JunctionGeometry& g) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const std::size_t nc = mesh.cells();
  FvWeights w;
  w.dual.assign(mesh.size(), 0.0);
  w.stiffness.resize(nc);
  w.half_left.resize(nc);
  w.half_right.resize(nc);
  w.rho.resize(nc);
  w.normal.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const double rl = mesh.nodes[c];
    const double rr = mesh.nodes[c + 1];
    const double dr = rr - rl;
    const double rho = 0.5 * (rl + rr);
    w.rho[c] = rho;
    w.stiffness[c] = two_pi * rho / dr;
    w.half_left[c] = two_pi * 0.5 * dr * (rl + 0.25 * dr);
    w.half_right[c] = two_pi * 0.5 * dr * (rr - 0.25 * dr);
    w.normal[c] = g.in_normal(rho) ? 1 : 0;
    w.dual[c] += w.half_left[c];
    w.dual[c + 1] += w.half_right[c];
  }
  return w;
}

double one_sided_derivative(const RadialMesh& mesh, std::span<const double> v, std::size_t node,
                            Side side) {
  const auto& x = mesh.nodes;
  std::size_t i1 = 0;
  std::size_t i2 = 0;
  if (side == Side::left) {
    if (node < 2) throw ConfigError("one-sided derivative needs two nodes on the left");
    i1 = node - 1;
    i2 = node - 2;
  } else {
    if (node + 2 >= x.size()) throw ConfigError("one-sided derivative needs two nodes on the right");
    i1 = node + 1;
    i2 = node + 2;
  }
  // Derivative of the quadratic through (x0, x1, x2) evaluated at x0.
  const double x0 = x[node];
  const double h1 = x[i1] - x0;
  const double h2 = x[i2] - x0;
  const double c1 = h2 / (h1 * (h2 - h1));
  const double c2 = -h1 / (h2 * (h2 - h1));
  return -(c1 + c2) * v[node] + c1 * v[i1] + c2 * v[i2];
}

double interpolate(const RadialMesh& mesh, std::span<const double> v, double r) {
  r = std::clamp(r, 0.0, 1.0);
  const std::size_t c = mesh.locate(r);
  const double t = (r - mesh.nodes[c]) / mesh.spacing(c);
  return (1.0 - t) * v[c] + t * v[c + 1];
}

std::vector<double> nodal_derivative(const RadialMesh& mesh, std::span<const double> v) {
  const auto& x = mesh.nodes;
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = x[i] - x[i - 1];
    const double hp = x[i + 1] - x[i];
    d[i] = (hm * hm * (v[i + 1] - v[i]) + hp * hp * (v[i] - v[i - 1])) / (hm * hp * (hm + hp));
  }
  d[n - 1] = one_sided_derivative(mesh, v, n - 1, Side::left);
  return d;
}

}  // namespace glj
