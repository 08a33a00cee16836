#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "glj/discretization.hpp"
#include "glj/error.hpp"
#include "glj/geometry.hpp"

using namespace glj;

TEST_SUITE("geometry") {
  TEST_CASE("thickness per regime") {
    CHECK(thickness_for_regime(ThinRegime{2.0}, 0.01) == doctest::Approx(0.02));
    const double eps = 0.01;
    CHECK(thickness_for_regime(ThickRegime{1.0}, eps) ==
          doctest::Approx(eps * std::log(std::abs(std::log(eps)))));
    CHECK_THROWS_AS(thickness_for_regime(ThickRegime{1.0}, 0.5), ConfigError);
  }

  TEST_CASE("geometry validation") {
    CHECK_NOTHROW(make_geometry(ThinRegime{1.0}, 0.02, 0.5));
    CHECK_THROWS_AS(make_geometry(ThinRegime{30.0}, 0.02, 0.5), ConfigError);
    CHECK_THROWS_AS(make_geometry(ThinRegime{1.0}, 0.02, 0.99), ConfigError);
    CHECK_THROWS_AS(make_geometry(ThinRegime{1.0}, 0.02, 1.2), ConfigError);
  }

  TEST_CASE("signed distance is positive in S and negative in N") {
    const auto g = make_geometry(ThinRegime{1.0}, 0.02, 0.5);
    CHECK(signed_distance(g, 0.3) == doctest::Approx(0.18));
    CHECK(signed_distance(g, 0.9) == doctest::Approx(0.38));
    CHECK(signed_distance(g, 0.5) == doctest::Approx(-0.02));
    CHECK(signed_distance(g, 0.49) == doctest::Approx(-0.01));
  }

  TEST_CASE("junction circles are mesh nodes and the mesh is graded") {
    for (double eps : {0.04, 0.01}) {
      const auto g = make_geometry(ThinRegime{1.0}, eps, 0.5);
      const auto m = build_mesh(g, eps, 2000);
      CHECK(m.nodes.front() == 0.0);
      CHECK(m.nodes.back() == 1.0);
      CHECK(m.nodes[m.inner_index] == doctest::Approx(g.r_inner()).epsilon(1e-14));
      CHECK(m.nodes[m.mid_index] == doctest::Approx(g.R).epsilon(1e-14));
      CHECK(m.nodes[m.outer_index] == doctest::Approx(g.r_outer()).epsilon(1e-14));
      for (std::size_t c = 0; c < m.cells(); ++c) REQUIRE(m.spacing(c) > 0.0);
      CHECK(m.interface_spacing() < 0.2 * eps);
      CHECK(m.max_spacing() > 4.0 * m.interface_spacing());
      CHECK(m.size() >= 1000);
      CHECK(m.size() <= 4000);
      for (std::size_t c = 1; c < m.cells(); ++c) {
        const double q = m.spacing(c) / m.spacing(c - 1);
        REQUIRE(std::max(q, 1.0 / q) <= 1.1);
      }
    }
  }

  TEST_CASE("too few points for the grading is a configuration error") {
    const auto g = make_geometry(ThinRegime{1.0}, 1e-6, 0.5);
    CHECK_THROWS_AS(build_mesh(g, 1e-6, 200), ConfigError);
    CHECK_THROWS_AS(build_mesh(g, 1e-6, 10), ConfigError);
    CHECK_NOTHROW(build_mesh(g, 1e-6, 2000));
  }

  TEST_CASE("locate returns the enclosing cell") {
    const auto g = make_geometry(ThinRegime{1.0}, 0.02, 0.5);
    const auto m = build_mesh(g, 0.02, 500);
    for (double r : {0.0, 0.123, 0.5, 0.77, 1.0}) {
      const auto c = m.locate(r);
      CHECK(m.nodes[c] <= r);
      CHECK(r <= m.nodes[c + 1]);
    }
  }

  TEST_CASE("dual areas tile the disc and the normal cells tile N") {
    const auto g = make_geometry(ThinRegime{1.0}, 0.02, 0.5);
    const auto m = build_mesh(g, 0.02, 800);
    const auto w = fv_weights(m, g);
    double total = 0.0, normal = 0.0;
    for (double v : w.dual) total += v;
    for (std::size_t c = 0; c < w.cells(); ++c)
      if (w.normal[c]) normal += w.cell_area(c);
    CHECK(total == doctest::Approx(std::numbers::pi).epsilon(1e-13));
    const double exact_n = std::numbers::pi * (g.r_outer() * g.r_outer() - g.r_inner() * g.r_inner());
    CHECK(normal == doctest::Approx(exact_n).epsilon(1e-13));
  }

  TEST_CASE("nodal quadrature and derivatives converge at second order") {
    const double exact = 2.0 * std::numbers::pi * (std::cos(3.0) + 3.0 * std::sin(3.0) - 1.0) / 9.0;
    std::vector<double> qerr, derr;
    for (std::size_t n : {400, 800, 1600}) {
      const auto g = make_geometry(ThinRegime{1.0}, 0.04, 0.5);
      const auto m = build_mesh(g, 0.04, n);
      const auto w = fv_weights(m, g);
      std::vector<double> f(m.size());
      for (std::size_t i = 0; i < m.size(); ++i) f[i] = std::cos(3.0 * m.nodes[i]);
      double q = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) q += w.dual[i] * f[i];
      qerr.push_back(std::abs(q - exact));
      const auto d = nodal_derivative(m, f);
      double e = 0.0;
      for (std::size_t i = 1; i < m.size(); ++i) e = std::max(e, std::abs(d[i] + 3.0 * std::sin(3.0 * m.nodes[i])));
      derr.push_back(e);
    }
    for (std::size_t k = 1; k < qerr.size(); ++k) {
      CHECK(std::log2(qerr[k - 1] / qerr[k]) > 1.8);
      CHECK(std::log2(derr[k - 1] / derr[k]) > 1.8);
    }
  }

  TEST_CASE("one-sided derivative is exact on quadratics") {
    const auto g = make_geometry(ThinRegime{1.0}, 0.02, 0.5);
    const auto m = build_mesh(g, 0.02, 400);
    std::vector<double> f(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) f[i] = 2.0 * m.nodes[i] * m.nodes[i] - m.nodes[i];
    const double r = m.nodes[m.outer_index];
    CHECK(one_sided_derivative(m, f, m.outer_index, Side::right) == doctest::Approx(4 * r - 1).epsilon(1e-10));
    CHECK(one_sided_derivative(m, f, m.outer_index, Side::left) == doctest::Approx(4 * r - 1).epsilon(1e-10));
    CHECK(interpolate(m, f, 0.3) == doctest::Approx(2 * 0.09 - 0.3).epsilon(1e-3));
  }
}
