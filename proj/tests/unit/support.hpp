#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "glj/density.hpp"
#include "glj/meissner.hpp"
#include "glj/params.hpp"

namespace glj::test {

inline ModelParams thin_params(double eps, std::size_t nr = 4000, double a = 1.0, double d = 1.0) {
  ModelParams p;
  p.a = a;
  p.regime = ThinRegime{d};
  p.eps = eps;
  p.nr = nr;
  return p;
}

inline ModelParams thick_params(double eps, std::size_t nr = 4000, double c = 1.0) {
  ModelParams p = thin_params(eps, nr);
  p.regime = ThickRegime{c};
  return p;
}

inline DensityProfile solve(const ModelParams& p) {
  const auto g = p.geometry();
  return solve_density(p, g, build_mesh(g, p.eps, p.nr));
}

// Profiles are reused across test cases; solves are deterministic.
inline const DensityProfile& cached_profile(double eps, bool thick = false, std::size_t nr = 4000) {
  static std::map<std::tuple<double, bool, std::size_t>, std::unique_ptr<DensityProfile>> cache;
  static std::mutex m;
  std::lock_guard lock(m);
  auto& slot = cache[{eps, thick, nr}];
  if (!slot) slot = std::make_unique<DensityProfile>(solve(thick ? thick_params(eps, nr) : thin_params(eps, nr)));
  return *slot;
}

}  // namespace glj::test
