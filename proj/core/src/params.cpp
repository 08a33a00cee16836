#include "glj/params.hpp"

#include <cmath>
#include <string>

#include "glj/error.hpp"

namespace glj {

void ModelParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string(name) + " must be positive and finite");
    }
  };
  positive(a, "a");
  positive(eps, "eps");
  if (const auto* t = std::get_if<ThinRegime>(&regime)) positive(t->d, "d");
  if (const auto* t = std::get_if<ThickRegime>(&regime)) positive(t->c, "c");
  if (H && (!(*H >= 0.0) || !std::isfinite(*H))) throw ConfigError("H must be nonnegative");
  if (!(h_frac >= 0.0)) throw ConfigError("H-frac must be nonnegative");
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  if (nr < 200) throw ConfigError("nr must be at least 200");
  if (ntheta < 64) throw ConfigError("ntheta must be at least 64");
  if (!(tol.newton_tol > 0.0) || tol.max_iterations <= 0) throw ConfigError("invalid tolerances");
  geometry();
}

}  // namespace glj
