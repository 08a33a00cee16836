#include "glj/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glj/error.hpp"

namespace glj {
namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw ConfigError(std::string(name) + " must be positive and finite, got " +
                      std::to_string(v));
  }
}

void require_nonnegative(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ConfigError(std::string(name) + " must be non-negative and finite, got " +
                      std::to_string(v));
  }
}

}  // namespace

double CanonicalConstants::x_root() const { return beta * std::exp(kSqrt2 * d); }

double CanonicalConstants::interface_value() const {
  const double x = x_root();
  return (x - 1.0) / (x + 1.0);
}

CanonicalConstants compute_constants(double a, double d) {
  require_positive(a, "a");
  require_positive(d, "d");
  const double s = std::sqrt(a);
  CanonicalConstants k;
  k.a = a;
  k.d = d;
  k.b_aux = 2.0 * std::cosh(s * d);
  k.c_aux = 2.0 * s * std::sinh(s * d);
  // b/c = coth(s d) / s; both roots of the quadratic have product -1, keep
  // the positive one written without subtraction.
  const double ratio = 1.0 / (s * std::tanh(s * d));
  const double x = kSqrt2 * ratio + std::sqrt(2.0 * ratio * ratio + 1.0);
  k.beta = x * std::exp(-kSqrt2 * d);
  k.a_tilde = (x - 1.0) / (k.b_aux * (x + 1.0));
  return k;
}

HalfPlaneConstants half_plane_constants(double a) {
  require_positive(a, "a");
  const double s = std::sqrt(a);
  const double p = kSqrt2 + std::sqrt(a + 2.0);
  HalfPlaneConstants k;
  k.a = a;
  k.beta_inf = p / s;
  k.a_inf = (p - s) / (p + s);
  return k;
}

double profile_U(const CanonicalConstants& k, double x2) {
  const double x = std::abs(x2);
  if (x >= k.d) {
    // (Y - 1)/(Y + 1) with Y = beta e^{sqrt2 x} is tanh(ln(Y)/2).
    return std::tanh(0.5 * (std::log(k.beta) + kSqrt2 * x));
  }
  return k.a_tilde * 2.0 * std::cosh(std::sqrt(k.a) * x);
}

double profile_U_derivative(const CanonicalConstants& k, double x2) {
  const double x = std::abs(x2);
  const double sign = x2 < 0.0 ? -1.0 : 1.0;
  if (x >= k.d) {
    const double z = 0.5 * (std::log(k.beta) + kSqrt2 * x);
    const double sech = 1.0 / std::cosh(z);
    return sign * 0.5 * kSqrt2 * sech * sech;
  }
  const double s = std::sqrt(k.a);
  return sign * k.a_tilde * 2.0 * s * std::sinh(s * x);
}

double profile_U_second_derivative(const CanonicalConstants& k, double x2) {
  const double x = std::abs(x2);
  if (x >= k.d) {
    const double z = 0.5 * (std::log(k.beta) + kSqrt2 * x);
    const double sech = 1.0 / std::cosh(z);
    return -sech * sech * std::tanh(z);
  }
  return k.a * k.a_tilde * 2.0 * std::cosh(std::sqrt(k.a) * x);
}

double profile_V(const HalfPlaneConstants& k, double t) {
  if (t >= 0.0) {
    return std::tanh(0.5 * (std::log(k.beta_inf) + kSqrt2 * t));
  }
  return k.a_inf * std::exp(std::sqrt(k.a) * t);
}

double profile_V_derivative(const HalfPlaneConstants& k, double t) {
  if (t >= 0.0) {
    const double z = 0.5 * (std::log(k.beta_inf) + kSqrt2 * t);
    const double sech = 1.0 / std::cosh(z);
    return 0.5 * kSqrt2 * sech * sech;
  }
  return std::sqrt(k.a) * k.a_inf * std::exp(std::sqrt(k.a) * t);
}

double degennes_coefficient(double a, double d) {
  require_positive(a, "a");
  require_nonnegative(d, "d");
  const double s = std::sqrt(a);
  return 2.0 * s * std::tanh(s * d);
}

DeGennesData degennes_matrix(double a, double d) {
  DeGennesData out;
  out.kappa = degennes_coefficient(a, d);
  out.matrix = {{{1.0, out.kappa}, {0.0, 1.0}}};
  return out;
}

std::array<double, 2> matching_residuals(const CanonicalConstants& k) {
  const double x = k.x_root();
  const double lhs1 = 2.0 * kSqrt2 * x / ((x + 1.0) * (x + 1.0));
  const double lhs2 = (x - 1.0) / (x + 1.0);
  return {lhs1 - k.c_aux * k.a_tilde, lhs2 - k.b_aux * k.a_tilde};
}

CanonicalResidual residual_canonical(const CanonicalConstants& k,
                                     std::span<const double> sample_points) {
  CanonicalResidual out;
  for (double x : sample_points) {
    if (std::abs(x) == k.d) continue;
    const double u = profile_U(k, x);
    const double upp = profile_U_second_derivative(k, x);
    const double r = std::abs(x) > k.d ? -upp - (1.0 - u * u) * u : -upp + k.a * u;
    out.ode = std::max(out.ode, std::abs(r));
  }
  // Evaluate both branch formulas at x = d directly.
  const double s = std::sqrt(k.a);
  const double z = 0.5 * (std::log(k.beta) + kSqrt2 * k.d);
  const double sech = 1.0 / std::cosh(z);
  const double outer_val = std::tanh(z);
  const double outer_der = 0.5 * kSqrt2 * sech * sech;
  const double inner_val = k.a_tilde * 2.0 * std::cosh(s * k.d);
  const double inner_der = k.a_tilde * 2.0 * s * std::sinh(s * k.d);
  out.interface = std::max(std::abs(outer_val - inner_val), std::abs(outer_der - inner_der));
  return out;
}

}  // namespace glj
