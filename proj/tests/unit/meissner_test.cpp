#include <doctest.h>

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "glj/meissner.hpp"
#include "support.hpp"

using namespace glj;
using glj::test::cached_profile;

namespace {

// With u = 1 the London equation is -Lap h + h = 0, h(1) = 1: h = I0(r) / I0(1).
double flat_density_error(std::size_t nr) {
  DensityProfile p = cached_profile(0.02, false, nr);
  std::fill(p.u.begin(), p.u.end(), 1.0);
  const auto lf = solve_london(p);
  const double i0 = boost::math::cyl_bessel_i(0, 1.0);
  double err = 0.0;
  for (std::size_t i = 0; i < p.mesh.size(); ++i) {
    err = std::max(err, std::abs(lf.h[i] - boost::math::cyl_bessel_i(0, p.mesh.nodes[i]) / i0));
  }
  return err;
}

}  // namespace

TEST_SUITE("meissner") {
  TEST_CASE("Thomas and sparse LU agree") {
    const auto& prof = cached_profile(0.02);
    const auto a = solve_london(prof, LinearSolver::thomas);
    const auto b = solve_london(prof, LinearSolver::sparse_lu);
    for (std::size_t i = 0; i < a.h.size(); ++i) CHECK(std::abs(a.h[i] - b.h[i]) < 1e-9);
  }

  TEST_CASE("flat density reproduces the modified Bessel solution at second order") {
    const double e1 = flat_density_error(500);
    const double e2 = flat_density_error(1000);
    const double e3 = flat_density_error(2000);
    CHECK(e3 < 1e-5);
    CHECK(std::log2(e1 / e2) > 1.7);
    CHECK(std::log2(e2 / e3) > 1.7);
  }

  TEST_CASE("h is in (0,1), nondecreasing and obeys the weighted gradient bound") {
    for (double eps : {0.04, 0.02, 0.01, 0.005}) {
      for (bool thick : {false, true}) {
        const auto& prof = cached_profile(eps, thick);
        const auto lf = solve_london(prof);
        CHECK(lf.h.back() == 1.0);
        for (std::size_t i = 0; i + 1 < lf.h.size(); ++i) {
          REQUIRE(lf.h[i] > 0.0);
          REQUIRE(lf.h[i] < 1.0);
          REQUIRE(lf.h[i + 1] >= lf.h[i]);
        }
        for (std::size_t c = 0; c < lf.q.size(); ++c) {
          REQUIRE(std::abs(lf.q[c]) <= 1.0 + 10.0 * prof.mesh.spacing(c));
        }
        CHECK(lf.c0 > 0.1);
        CHECK(gradient_integral_bound_violation(prof, lf) <= 1e-12);
      }
    }
  }

  TEST_CASE("origin curvature matches the equation at r = 0") {
    const auto lf = solve_london(cached_profile(0.02));
    CHECK(std::abs(lf.origin_curvature - lf.origin_target) <= 1e-6 * std::abs(lf.origin_curvature));
  }

  TEST_CASE("potential and h forms of the Meissner energy agree") {
    const auto& prof = cached_profile(0.01);
    const auto lf = solve_london(prof);
    CHECK(lf.j0_energy == doctest::Approx(lf.j0_h_form).epsilon(1e-9));
    const auto me = meissner_energies(prof, lf, 2.0);
    CHECK(me.m0 == doctest::Approx(prof.c0_energy + 4.0 * lf.j0_energy));
  }

  TEST_CASE("the optimal potential minimizes the discrete functional") {
    const auto& prof = cached_profile(0.02);
    const auto lf = solve_london(prof);
    const double e0 = london_functional(prof, lf.q);
    for (int k = 1; k <= 3; ++k) {
      for (double t : {1e-3, -1e-3}) {
        auto g = lf.q;
        for (std::size_t c = 0; c < g.size(); ++c) g[c] += t * std::cos(k * 2.0 * prof.weights.rho[c]);
        CHECK(london_functional(prof, g) > e0);
      }
    }
  }

  TEST_CASE("curl of the optimal potential is h") {
    const auto& prof = cached_profile(0.02);
    const auto lf = solve_london(prof);
    const auto b = discrete_curl(prof.weights, lf.q);
    // Area-weighted; the floor is cancellation in the stiff fluxes.
    const auto mass = cell_u2_mass(prof.weights, prof.u);
    double l1 = 0.0, stiff = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) l1 += prof.weights.dual[i] * std::abs(b[i] - lf.h[i]);
    for (std::size_t c = 0; c < mass.size(); ++c) {
      stiff += std::pow(2.0 * std::numbers::pi * prof.weights.rho[c], 2) / mass[c];
    }
    CHECK(l1 < 1e-14 * stiff);
  }
}
