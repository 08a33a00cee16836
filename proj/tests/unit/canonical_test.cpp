#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "glj/canonical.hpp"
#include "glj/error.hpp"

using namespace glj;

namespace {

// Bisection on the two C^1 matching conditions at x = d, written from scratch:
// tanh(z) = 2 A cosh(s d), sqrt2/2 sech^2(z) = 2 A s sinh(s d), z = (ln beta + sqrt2 d)/2.
// Eliminating A leaves g(z) = s tanh(s d) tanh(z) - sqrt2/2 sech^2(z), increasing on z > 0.
std::array<double, 2> bisect_matching(double a, double d) {
  const double s = std::sqrt(a), r2 = std::sqrt(2.0);
  auto g = [&](double z) {
    const double c = std::cosh(z);
    return s * std::tanh(s * d) * std::tanh(z) - 0.5 * r2 / (c * c);
  };
  double lo = 0.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  const double z = 0.5 * (lo + hi);
  return {std::exp(2.0 * z - r2 * d), std::tanh(z) / (2.0 * std::cosh(s * d))};
}

}  // namespace

TEST_SUITE("canonical") {
  TEST_CASE("closed forms match a bisection solve of the matching system") {
    for (double a : {0.25, 1.0, 4.0}) {
      for (double d : {0.1, 0.5, 1.0, 2.0}) {
        const auto k = compute_constants(a, d);
        const auto ref = bisect_matching(a, d);
        CHECK(k.beta == doctest::Approx(ref[0]).epsilon(1e-10));
        CHECK(k.a_tilde == doctest::Approx(ref[1]).epsilon(1e-10));
        const auto m = matching_residuals(k);
        CHECK(std::abs(m[0]) < 1e-12);
        CHECK(std::abs(m[1]) < 1e-12);
      }
    }
  }

  TEST_CASE("profile solves the ODE on both branches at 1000 sample points") {
    const auto k = compute_constants(1.0, 1.0);
    std::vector<double> xs;
    for (int s = 0; s < 1000; ++s) xs.push_back(-12.0 + 24.0 * (s + 0.5) / 1000.0);
    const auto res = residual_canonical(k, xs);
    CHECK(res.ode < 1e-10);
    CHECK(res.interface < 1e-12);
  }

  TEST_CASE("profile second derivative agrees with finite differences") {
    const auto k = compute_constants(2.0, 0.7);
    for (double x : {-3.0, -0.3, 0.2, 1.5, 4.0}) {
      const double h = 1e-4;
      const double fd = (profile_U(k, x + h) - 2.0 * profile_U(k, x) + profile_U(k, x - h)) / (h * h);
      CHECK(profile_U_second_derivative(k, x) == doctest::Approx(fd).epsilon(1e-5));
      const double fd1 = (profile_U(k, x + h) - profile_U(k, x - h)) / (2.0 * h);
      CHECK(profile_U_derivative(k, x) == doctest::Approx(fd1).epsilon(1e-7));
    }
  }

  TEST_CASE("jump coefficient equals the finite-difference log-derivative jump") {
    for (double d : {0.3, 1.0, 2.5}) {
      const auto k = compute_constants(1.0, d);
      const double h = 1e-4;
      // One-sided three-point derivatives taken from the outer branches.
      const double right = (-3.0 * profile_U(k, d) + 4.0 * profile_U(k, d + h) - profile_U(k, d + 2 * h)) / (2 * h);
      const double left = (3.0 * profile_U(k, -d) - 4.0 * profile_U(k, -d - h) + profile_U(k, -d - 2 * h)) / (2 * h);
      const double jump = right / profile_U(k, d) - left / profile_U(k, -d);
      CHECK(degennes_coefficient(1.0, d) == doctest::Approx(jump).epsilon(1e-6));
    }
  }

  TEST_CASE("transfer matrix maps interface data across the layer") {
    const auto k = compute_constants(1.0, 1.0);
    const auto dg = degennes_matrix(1.0, 1.0);
    const double um = profile_U(k, -1.0), dm = profile_U_derivative(k, -1.0);
    const double up = profile_U(k, 1.0), dp = profile_U_derivative(k, 1.0);
    CHECK(std::abs(dg.matrix[0][0] * dm + dg.matrix[0][1] * um - dp) < 1e-10);
    CHECK(std::abs(dg.matrix[1][0] * dm + dg.matrix[1][1] * um - up) < 1e-10);
  }

  TEST_CASE("limit cases of the jump coefficient") {
    CHECK(degennes_coefficient(1.0, 0.0) == 0.0);
    CHECK(degennes_coefficient(3.0, 0.0) == 0.0);
    for (double a : {0.5, 1.0, 9.0}) {
      const double d = 12.0 / std::sqrt(a);
      CHECK(std::abs(degennes_coefficient(a, d) - 2.0 * std::sqrt(a)) < 1e-8);
      CHECK(std::abs(degennes_coefficient(a, 2 * d) - 2.0 * std::sqrt(a)) < 1e-8);
    }
  }

  TEST_CASE("half-plane constants give a C1 profile") {
    for (double a : {0.5, 1.0, 3.0}) {
      const auto k = half_plane_constants(a);
      CHECK(profile_V(k, 0.0) == doctest::Approx(profile_V(k, -1e-300)).epsilon(1e-12));
      CHECK(profile_V_derivative(k, 0.0) == doctest::Approx(profile_V_derivative(k, -1e-300)).epsilon(1e-12));
    }
  }

  TEST_CASE("large d approaches the half-plane profile") {
    const auto k = compute_constants(1.0, 20.0);
    const auto hp = half_plane_constants(1.0);
    for (double t : {0.0, 0.5, 2.0}) CHECK(profile_U(k, 20.0 + t) == doctest::Approx(profile_V(hp, t)).epsilon(1e-12));
  }

  TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(compute_constants(-1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(compute_constants(1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(degennes_coefficient(1.0, -0.1), ConfigError);
    CHECK_THROWS_AS(half_plane_constants(0.0), ConfigError);
  }
}
