#include "glj/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/core.h>

#include "glj/error.hpp"

namespace glj {

void JunctionGeometry::validate() const {
  if (!(R > 0.0 && R < 1.0)) throw ConfigError("junction radius R must lie in (0,1)");
  if (!(ell > 0.0)) throw ConfigError("junction half-thickness must be positive");
  if (!(ell < R)) throw ConfigError("junction half-thickness must be smaller than R");
  if (!(R + ell < 1.0)) throw ConfigError("R + ell must be smaller than 1 (outer S region empty)");
}

bool is_thin(const ThicknessRegime& regime) {
  return std::holds_alternative<ThinRegime>(regime);
}

double thickness_for_regime(const ThicknessRegime& regime, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be positive");
  if (const auto* thin = std::get_if<ThinRegime>(&regime)) {
    if (!(thin->d > 0.0)) throw ConfigError("thin regime needs d > 0");
    return thin->d * eps;
  }
  const auto& thick = std::get<ThickRegime>(regime);
  if (!(thick.c > 0.0)) throw ConfigError("thick regime needs c > 0");
  const double loglog = std::log(std::abs(std::log(eps)));
  if (!(eps < 1.0) || !(loglog > 0.0)) {
    throw ConfigError(fmt::format("thick regime needs eps < 1/e so that ln|ln eps| > 0 (eps = {:g})", eps));
  }
  return thick.c * eps * loglog;
}

JunctionGeometry make_geometry(const ThicknessRegime& regime, double eps, double R) {
  JunctionGeometry g{R, thickness_for_regime(regime, eps)};
  g.validate();
  return g;
}

double signed_distance(const JunctionGeometry& g, double r) {
  const double lo = g.r_inner();
  const double hi = g.r_outer();
  if (r <= lo) return lo - r;
  if (r >= hi) return r - hi;
  return -std::min(r - lo, hi - r);
}

double RadialMesh::max_spacing() const {
  double h = 0.0;
  for (std::size_t c = 0; c < cells(); ++c) h = std::max(h, spacing(c));
  return h;
}

double RadialMesh::min_spacing() const {
  double h = 1.0;
  for (std::size_t c = 0; c < cells(); ++c) h = std::min(h, spacing(c));
  return h;
}

double RadialMesh::interface_spacing() const {
  double h = 0.0;
  for (std::size_t i : {inner_index, outer_index}) {
    h = std::max({h, spacing(i - 1), spacing(i)});
  }
  return h;
}

std::size_t RadialMesh::locate(double r) const {
  auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
  if (it == nodes.begin()) return 0;
  const auto idx = static_cast<std::size_t>(it - nodes.begin()) - 1;
  return std::min(idx, cells() - 1);
}

namespace {

struct Segment {
  double lo;
  double hi;
};

constexpr std::size_t kSamples = 4096;

// Cumulative integral of 1/sigma on a uniform sampling of the segment.
std::vector<double> cumulative_density(const Segment& s, const JunctionGeometry& g, double eps,
                                       const MeshGrading& shape) {
  auto sigma = [&](double x) {
    const double dist = std::min(std::abs(x - g.r_inner()), std::abs(x - g.r_outer()));
    return std::min(shape.max_spacing, shape.interface_spacing * eps + shape.growth * dist);
  };
  std::vector<double> cum(kSamples + 1, 0.0);
  const double dx = (s.hi - s.lo) / static_cast<double>(kSamples);
  double prev = 1.0 / sigma(s.lo);
  for (std::size_t k = 1; k <= kSamples; ++k) {
    const double cur = 1.0 / sigma(s.lo + dx * static_cast<double>(k));
    cum[k] = cum[k - 1] + 0.5 * dx * (prev + cur);
    prev = cur;
  }
  return cum;
}

}  // namespace

RadialMesh build_mesh(const JunctionGeometry& g, double eps, std::size_t target_points,
                      const MeshGrading& shape) {
  g.validate();
  if (target_points < 200) {
    throw ConfigError("mesh target_points must be at least 200, got " +
                      std::to_string(target_points));
  }
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");

  const std::array<Segment, 4> segments{
      {{0.0, g.r_inner()}, {g.r_inner(), g.R}, {g.R, g.r_outer()}, {g.r_outer(), 1.0}}};
  std::array<std::vector<double>, 4> cum;
  double total = 0.0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    cum[s] = cumulative_density(segments[s], g, eps, shape);
    total += cum[s].back();
  }

  MeshGrading grading = shape;
  grading.scale = total / static_cast<double>(target_points - 1);
  if (grading.scale > 1.0) {
    throw ConfigError(fmt::format("infeasible grading: {} points cannot resolve eps = {:g} (need about {})",
                                  target_points, eps, static_cast<std::size_t>(std::ceil(total)) + 1));
  }

  RadialMesh mesh;
  mesh.grading = grading;
  mesh.nodes.push_back(0.0);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    const auto& c = cum[s];
    const auto cells =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(c.back() / grading.scale)));
    const double dx = (seg.hi - seg.lo) / static_cast<double>(kSamples);
    std::size_t k = 0;
    for (std::size_t j = 1; j < cells; ++j) {
      const double target = c.back() * static_cast<double>(j) / static_cast<double>(cells);
      while (c[k + 1] < target) ++k;
      const double t = (target - c[k]) / (c[k + 1] - c[k]);
      mesh.nodes.push_back(seg.lo + dx * (static_cast<double>(k) + t));
    }
    mesh.nodes.push_back(seg.hi);
    if (s == 0) mesh.inner_index = mesh.nodes.size() - 1;
    if (s == 1) mesh.mid_index = mesh.nodes.size() - 1;
    if (s == 2) mesh.outer_index = mesh.nodes.size() - 1;
  }
  mesh.nodes.back() = 1.0;
  return mesh;
}

}  // namespace glj
