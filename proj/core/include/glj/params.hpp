#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "glj/geometry.hpp"

namespace glj {

struct SolverTolerances {
  double newton_tol = 1e-10;
  int max_iterations = 200;
};

struct ModelParams {
  double a = 1.0;
  ThicknessRegime regime = ThinRegime{1.0};
  double eps = 0.02;
  /// Applied field; empty means "auto" = h_frac * vortex-less budget.
  std::optional<double> H = 0.0;
  double h_frac = 0.25;
  double R = 0.5;
  std::size_t nr = 4000;
  std::size_t ntheta = 256;
  double lambda = 0.25;
  double alpha = 0.4;
  std::uint64_t seed = 1;
  SolverTolerances tol;

  /// Throws ConfigError on any out-of-range value.
  void validate() const;
  JunctionGeometry geometry() const { return make_geometry(regime, eps, R); }
};

}  // namespace glj
