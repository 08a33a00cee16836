#include "glj/vortex.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <thread>

#include "glj/discretization.hpp"
#include "glj/error.hpp"

namespace glj {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double phase_increment(std::complex<double> a, std::complex<double> b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return std::arg(b * std::conj(a));
}

bool in_ball(const Ball& b, Point p, double slack = 0.0) {
  return distance(b.center, p) <= b.radius * (1.0 + slack);
}

Ball circle_two(Point a, Point b) {
  return {{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}, 0.5 * distance(a, b), 0, true};
}

Ball circle_three(Point a, Point b, Point c) {
  const double bx = b.x - a.x, by = b.y - a.y;
  const double cx = c.x - a.x, cy = c.y - a.y;
  const double d = 2.0 * (bx * cy - by * cx);
  if (std::abs(d) < 1e-300) {
    Ball best = circle_two(a, b);
    for (const Ball& o : {circle_two(a, c), circle_two(b, c)})
      if (o.radius > best.radius) best = o;
    return best;
  }
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  const Point center{a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
  return {center, distance(center, a), 0, true};
}

bool contained_in_disc(const Ball& b) { return std::hypot(b.center.x, b.center.y) + b.radius < 1.0; }

// Degree on the boundary circle; a slightly larger circle is tried when the
// modulus is too small on the first one.
std::optional<int> boundary_degree(const ComplexField2D& field, const Ball& b) {
  for (double f : {1.0, 1.1, 1.25}) {
    const Ball probe{b.center, b.radius * f, 0, true};
    if (!contained_in_disc(probe)) break;
    try {
      return winding_number(field, probe.center, probe.radius);
    } catch (const SolverError&) {
    }
  }
  return std::nullopt;
}

void merge_until_disjoint(std::vector<Ball>& balls, std::size_t* events) {
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < balls.size() && !merged; ++i) {
      for (std::size_t k = i + 1; k < balls.size() && !merged; ++k) {
        const double gap = distance(balls[i].center, balls[k].center) -
                           (balls[i].radius + balls[k].radius);
        if (gap <= 1e-12 * (balls[i].radius + balls[k].radius)) {
          Ball m = enclosing_ball(balls[i], balls[k]);
          m.degree = balls[i].degree + balls[k].degree;
          balls[i] = m;
          balls.erase(balls.begin() + static_cast<std::ptrdiff_t>(k));
          if (events) ++*events;
          merged = true;
        }
      }
    }
  }
}

double u_at(std::span<const double> u, std::size_t c) { return 0.5 * (u[c] + u[c + 1]); }

// Column of nodal values along angle index j, including the origin.
std::vector<double> column(const PolarGrid2D& g, std::span<const double> v, std::size_t j) {
  std::vector<double> out(g.nr());
  for (std::size_t i = 0; i < g.nr(); ++i) out[i] = v[g.index(i, j)];
  return out;
}

std::vector<double> radial_derivative(const PolarGrid2D& g, std::span<const double> v) {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t j = 0; j < g.ntheta; ++j) {
    const auto d = nodal_derivative(g.mesh, column(g, v, j));
    for (std::size_t i = 1; i < g.nr(); ++i) out[g.index(i, j)] = d[i];
  }
  return out;
}

std::vector<double> angular_derivative(const PolarGrid2D& g, std::span<const double> v) {
  std::vector<double> out(g.size(), 0.0);
  const std::size_t nt = g.ntheta;
  for (std::size_t i = 1; i < g.nr(); ++i)
    for (std::size_t j = 0; j < nt; ++j)
      out[g.index(i, j)] =
          (v[g.index(i, j + 1)] - v[g.index(i, j + nt - 1)]) / (2.0 * g.dtheta);
  return out;
}

// Gradient at the origin from the first angular mode of ring 1.
Point origin_gradient(const PolarGrid2D& g, std::span<const double> v) {
  double gx = 0.0, gy = 0.0;
  for (std::size_t j = 0; j < g.ntheta; ++j) {
    const double dv = v[g.index(1, j)] - v[0];
    gx += dv * std::cos(g.theta(j));
    gy += dv * std::sin(g.theta(j));
  }
  const double s = 2.0 / (static_cast<double>(g.ntheta) * g.r(1));
  return {gx * s, gy * s};
}

std::vector<double> area_load(const PolarGrid2D& g, std::span<const double> density) {
  std::vector<double> load(g.size(), 0.0);
  load[0] = density[0] * g.node_area[0];
  for (std::size_t i = 1; i < g.nr(); ++i)
    for (std::size_t j = 0; j < g.ntheta; ++j)
      load[g.index(i, j)] = density[g.index(i, j)] * g.node_area[i];
  return load;
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::complex<double> ComplexField2D::sample(Point p) const {
  return interpolate_polar<std::complex<double>>(grid, values, p.x, p.y);
}

ComplexField2D sample_field(const PolarGrid2D& grid, const ComplexFunction& psi,
                            const VectorFunction& potential) {
  ComplexField2D f;
  f.grid = grid;
  f.values.resize(grid.size());
  f.ax.assign(grid.size(), 0.0);
  f.ay.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.nr(); ++i) {
    for (std::size_t j = 0; j < grid.ntheta; ++j) {
      const std::size_t k = grid.index(i, j);
      const double x = grid.x(i, j), y = grid.y(i, j);
      f.values[k] = psi(x, y);
      if (potential) {
        const Point a = potential(x, y);
        f.ax[k] = a.x;
        f.ay[k] = a.y;
      }
    }
  }
  return f;
}

std::complex<double> synthetic_vortex(Point x, Point p, double eps, int degree) {
  const double dx = x.x - p.x, dy = x.y - p.y;
  const double r = std::hypot(dx, dy);
  if (r == 0.0) return 0.0;
  const std::complex<double> dir(dx / r, dy / r);
  const std::complex<double> phase = degree >= 0 ? std::pow(dir, degree)
                                                 : std::pow(std::conj(dir), -degree);
  return std::tanh(r / eps) * phase;
}

double BallCollection::total_radius() const {
  double s = 0.0;
  for (const auto& b : balls) s += b.radius;
  return s;
}

int BallCollection::total_abs_degree() const {
  int s = 0;
  for (const auto& b : balls) s += std::abs(b.degree);
  return s;
}

int BallCollection::total_degree() const {
  int s = 0;
  for (const auto& b : balls) s += b.degree;
  return s;
}

bool BallCollection::covers(Point p) const {
  return std::any_of(balls.begin(), balls.end(), [&](const Ball& b) { return in_ball(b, p); });
}

bool BallCollection::disjoint() const {
  for (std::size_t i = 0; i < balls.size(); ++i)
    for (std::size_t k = i + 1; k < balls.size(); ++k)
      if (distance(balls[i].center, balls[k].center) < balls[i].radius + balls[k].radius)
        return false;
  return true;
}

int winding_number(const ComplexField2D& field, std::size_t row) {
  const auto& g = field.grid;
  if (row == 0 || row >= g.nr()) throw ConfigError("winding circle must be a positive grid radius");
  double total = 0.0;
  for (std::size_t j = 0; j < g.ntheta; ++j) {
    const auto a = field.at(row, j);
    if (std::abs(a) < 0.1)
      throw SolverError("modulus below 0.1 on the winding circle", std::abs(a));
    total += phase_increment(a, field.at(row, j + 1));
  }
  return static_cast<int>(std::lround(total / two_pi));
}

int winding_number(const ComplexField2D& field, Point center, double radius,
                   std::size_t samples) {
  if (radius <= 0.0) throw ConfigError("winding circle radius must be positive");
  if (std::hypot(center.x, center.y) + radius > 1.0 + 1e-12)
    throw ConfigError("winding circle leaves the disc");
  if (samples == 0) samples = std::max<std::size_t>(128, field.grid.ntheta);
  std::complex<double> prev;
  double total = 0.0;
  for (std::size_t s = 0; s <= samples; ++s) {
    const double t = two_pi * static_cast<double>(s % samples) / static_cast<double>(samples);
    const auto v = field.sample({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
    if (std::abs(v) < 0.1) throw SolverError("modulus below 0.1 on the winding circle", std::abs(v));
    if (s > 0) total += phase_increment(prev, v);
    prev = v;
  }
  return static_cast<int>(std::lround(total / two_pi));
}

Ball enclosing_ball(std::vector<Point> points, std::uint64_t seed) {
  if (points.empty()) return {};
  std::mt19937_64 rng(seed);
  std::shuffle(points.begin(), points.end(), rng);
  constexpr double slack = 1e-12;
  Ball b{points[0], 0.0, 0, true};
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (distance(b.center, points[i]) <= b.radius + slack) continue;
    b = {points[i], 0.0, 0, true};
    for (std::size_t j = 0; j < i; ++j) {
      if (distance(b.center, points[j]) <= b.radius + slack) continue;
      b = circle_two(points[i], points[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (distance(b.center, points[k]) <= b.radius + slack) continue;
        b = circle_three(points[i], points[j], points[k]);
      }
    }
  }
  return b;
}

Ball enclosing_ball(const Ball& a, const Ball& b) {
  const double d = distance(a.center, b.center);
  if (d + b.radius <= a.radius) return a;
  if (d + a.radius <= b.radius) return b;
  const double r = 0.5 * (d + a.radius + b.radius);
  const double t = (r - a.radius) / d;
  Ball m;
  m.center = {a.center.x + t * (b.center.x - a.center.x), a.center.y + t * (b.center.y - a.center.y)};
  m.radius = r;
  return m;
}

BallCollection sublevel_cover(const ComplexField2D& field, double delta, std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  const auto& g = field.grid;
  const std::size_t nr = g.nr(), nt = g.ntheta;
  const double level = 1.0 - delta;
  // Node 0 stands for the whole origin row.
  auto flagged = [&](std::size_t i, std::size_t j) { return std::abs(field.at(i, j)) <= level; };
  std::vector<int> label(g.size(), -1);
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> stack;
  auto visit = [&](std::size_t start) {
    std::vector<std::size_t> comp;
    label[start] = static_cast<int>(components.size());
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      comp.push_back(k);
      const std::size_t i = k / nt, j = k % nt;
      std::vector<std::size_t> nb;
      if (i == 0) {
        for (std::size_t jj = 0; jj < nt; ++jj) nb.push_back(g.index(1, jj));
      } else {
        nb.push_back(i == 1 ? 0 : g.index(i - 1, j));
        if (i + 1 < nr) nb.push_back(g.index(i + 1, j));
        nb.push_back(g.index(i, j + 1));
        nb.push_back(g.index(i, j + nt - 1));
      }
      for (std::size_t q : nb) {
        if (label[q] >= 0 || !flagged(q / nt, q % nt)) continue;
        label[q] = label[start];
        stack.push_back(q);
      }
    }
    components.push_back(std::move(comp));
  };
  if (flagged(0, 0)) visit(0);
  for (std::size_t i = 1; i < nr; ++i)
    for (std::size_t j = 0; j < nt; ++j)
      if (label[g.index(i, j)] < 0 && flagged(i, j)) visit(g.index(i, j));

  BallCollection out;
  for (const auto& comp : components) {
    std::vector<Point> pts;
    double pad = 0.0;
    for (std::size_t k : comp) {
      const std::size_t i = k / nt, j = k % nt;
      pts.push_back(field.node(i, j));
      for (std::size_t ii = i == 0 ? 0 : i - 1; ii <= std::min(i + 1, nr - 1); ++ii)
        pad = std::max(pad, g.local_spacing(ii));
    }
    Ball b = enclosing_ball(std::move(pts), seed);
    b.radius += 1.5 * pad;
    out.balls.push_back(b);
  }
  merge_until_disjoint(out.balls, nullptr);
  for (auto& b : out.balls) {
    b.inside = contained_in_disc(b);
    if (!b.inside) {
      out.clipped = true;
      b.degree = 0;
      continue;
    }
    b.degree = boundary_degree(field, b).value_or(0);
  }
  return out;
}

BallCollection grow_balls(const BallCollection& initial, double eta, const ComplexField2D& field) {
  BallCollection out = initial;
  out.merge_events = 0;
  out.exited = false;
  out.degree_mismatch = false;
  if (out.balls.empty()) return out;
  if (!(eta > out.total_radius())) throw ConfigError("eta must exceed the initial total radius");
  for (auto& b : out.balls)
    if (!b.inside) b.degree = 0;

  while (true) {
    const double target = eta / out.total_radius();
    double t_star = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.balls.size(); ++i)
      for (std::size_t k = i + 1; k < out.balls.size(); ++k)
        t_star = std::min(t_star, distance(out.balls[i].center, out.balls[k].center) /
                                      (out.balls[i].radius + out.balls[k].radius));
    const double t = std::min(t_star, target);
    for (auto& b : out.balls) b.radius *= t;
    for (const auto& b : out.balls)
      if (!contained_in_disc(b)) out.exited = true;
    if (t_star >= target) break;
    merge_until_disjoint(out.balls, &out.merge_events);
  }

  for (auto& b : out.balls) {
    b.inside = contained_in_disc(b);
    if (!b.inside) {
      b.degree = 0;
      continue;
    }
    const auto measured = boundary_degree(field, b);
    if (!measured || *measured != b.degree) out.degree_mismatch = true;
    if (measured) b.degree = *measured;
  }
  return out;
}

LowerBoundReport lower_bound_eval(const BallCollection& balls, std::span<const double> u_nodal,
                                  const ComplexField2D& field, double eps, double H, double J0,
                                  const LowerBoundOptions& options) {
  const auto& g = field.grid;
  if (u_nodal.size() != g.nr()) throw ConfigError("density size does not match the grid");
  const double lne = std::abs(std::log(eps));
  const double remainder = options.C * std::pow(lne, -options.n);
  const double omega_level = 1.0 - std::pow(lne, -options.n);
  const double log_term = std::log(options.eta / std::pow(eps, options.alpha)) - remainder;

  LowerBoundReport rep;
  rep.total_bound = H * H * J0 - options.C * H * std::pow(lne, -options.n);
  for (const auto& b : balls.balls) {
    BallEnergy be;
    be.ball = b;
    const double rc = std::hypot(b.center.x, b.center.y);
    const double lo = std::max(0.0, rc - b.radius), hi = std::min(1.0, rc + b.radius);
    double umin = std::min(interpolate(g.mesh, u_nodal, lo), interpolate(g.mesh, u_nodal, hi));
    for (std::size_t i = 0; i < g.nr(); ++i)
      if (g.r(i) > lo && g.r(i) < hi) umin = std::min(umin, u_nodal[i]);
    be.min_u2 = umin * umin;
    be.bound = two_pi * std::abs(b.degree) * be.min_u2 * log_term;
    rep.balls.push_back(be);
    rep.ball_bound_sum += be.bound;
    if (b.degree >= 0)
      rep.total_bound += two_pi * (options.alpha * be.min_u2 * lne - 2.0 * H) * b.degree;
  }

  const std::size_t nt = g.ntheta;
  for (std::size_t c = 0; c + 1 < g.nr(); ++c) {
    const double rho = g.rho[c], dr = g.mesh.spacing(c);
    const double area = rho * dr * g.dtheta;
    const double u = u_at(u_nodal, c);
    for (std::size_t j = 0; j < nt; ++j) {
      const double th = g.theta(j) + 0.5 * g.dtheta;
      const Point centre{rho * std::cos(th), rho * std::sin(th)};
      std::size_t owner = balls.balls.size();
      for (std::size_t k = 0; k < balls.balls.size(); ++k)
        if (in_ball(balls.balls[k], centre)) owner = k;
      if (owner == balls.balls.size()) continue;

      const std::size_t k00 = g.index(c, j), k01 = g.index(c, j + 1);
      const std::size_t k10 = g.index(c + 1, j), k11 = g.index(c + 1, j + 1);
      const auto& v = field.values;
      const std::complex<double> phi = 0.25 * (v[k00] + v[k01] + v[k10] + v[k11]);
      const double ax = 0.25 * (field.ax[k00] + field.ax[k01] + field.ax[k10] + field.ax[k11]);
      const double ay = 0.25 * (field.ay[k00] + field.ay[k01] + field.ay[k10] + field.ay[k11]);
      const double ar = ax * std::cos(th) + ay * std::sin(th);
      const double at = -ax * std::sin(th) + ay * std::cos(th);

      // Edge circulation of A around the cell (chords, trapezoid).
      auto edge = [&](std::size_t p, std::size_t q, std::size_t pi, std::size_t pj, std::size_t qi,
                      std::size_t qj) {
        const double ex = g.x(qi, qj) - g.x(pi, pj), ey = g.y(qi, qj) - g.y(pi, pj);
        return 0.5 * ((field.ax[p] + field.ax[q]) * ex + (field.ay[p] + field.ay[q]) * ey);
      };
      const double circ = edge(k00, k10, c, j, c + 1, j) + edge(k10, k11, c + 1, j, c + 1, j + 1) +
                          edge(k11, k01, c + 1, j + 1, c, j + 1) + edge(k01, k00, c, j + 1, c, j);
      const double curl = circ / area;
      double e = (curl - H) * (curl - H) * area;

      if (std::abs(phi) > omega_level) {
        const auto dphi_r = (v[k10] + v[k11] - v[k00] - v[k01]) / (2.0 * dr);
        const auto dphi_t = (v[k01] + v[k11] - v[k00] - v[k10]) / (2.0 * rho * g.dtheta);
        const std::complex<double> i1(0.0, 1.0);
        const auto cr = dphi_r - i1 * ar * phi;
        const auto ct = dphi_t - i1 * at * phi;
        e += u * u * (std::norm(cr) + std::norm(ct)) * area;
      }
      rep.balls[owner].actual += e;
    }
  }
  for (const auto& be : rep.balls) rep.actual_sum += be.actual;
  return rep;
}

JacobianField jacobian_field(const ComplexField2D& field) {
  const auto& g = field.grid;
  const std::size_t nt = g.ntheta;
  JacobianField out;
  out.density.assign((g.nr() - 1) * nt, 0.0);
  auto form = [&](std::size_t pi, std::size_t pj, std::size_t qi, std::size_t qj) {
    const std::size_t p = g.index(pi, pj), q = g.index(qi, qj);
    const auto a = field.values[p], b = field.values[q];
    const double rho2 = std::abs(a) * std::abs(b);
    const double ex = g.x(qi, qj) - g.x(pi, pj), ey = g.y(qi, qj) - g.y(pi, pj);
    const double ae = 0.5 * ((field.ax[p] + field.ax[q]) * ex + (field.ay[p] + field.ay[q]) * ey);
    return rho2 * phase_increment(a, b) + ae * (1.0 - rho2);
  };
  for (std::size_t c = 0; c + 1 < g.nr(); ++c) {
    const double area = 0.5 * g.dtheta * (g.r(c + 1) * g.r(c + 1) - g.r(c) * g.r(c));
    for (std::size_t j = 0; j < nt; ++j) {
      double circ = form(c, j, c + 1, j) + form(c + 1, j, c + 1, j + 1) + form(c + 1, j + 1, c, j + 1);
      if (c > 0) circ += form(c, j + 1, c, j);
      out.density[c * nt + j] = circ / area;
      out.total_mass += circ;
    }
  }
  return out;
}

std::vector<double> density_on_grid(const DensityProfile& profile, const PolarGrid2D& grid) {
  std::vector<double> u(grid.nr());
  for (std::size_t i = 0; i < grid.nr(); ++i) u[i] = interpolate(profile.mesh, profile.u, grid.r(i));
  return u;
}

std::vector<double> weighted_london_solve(const PolarGrid2D& grid, std::span<const double> u_nodal,
                                          std::span<const double> load) {
  if (u_nodal.size() != grid.nr()) throw ConfigError("density size does not match the grid");
  std::vector<double> kc(grid.nr() - 1), kn(grid.nr());
  for (std::size_t c = 0; c + 1 < grid.nr(); ++c) kc[c] = 1.0 / std::pow(u_at(u_nodal, c), 2);
  for (std::size_t i = 0; i < grid.nr(); ++i) kn[i] = 1.0 / (u_nodal[i] * u_nodal[i]);
  PolarFvSolver solver(grid, std::move(kc), std::move(kn), 1.0, Boundary::dirichlet);
  return solver.solve(load);
}

PinnedConfiguration build_pinned_configuration(int n, const ModelParams& params,
                                               const DensityProfile& profile,
                                               const PolarGrid2D& grid) {
  const double eps = params.eps, R = params.R;
  if (n < 1) throw ConfigError("need at least one pinned vortex");
  const std::size_t mid = grid.mesh.mid_index;
  if (std::abs(grid.r(mid) - R) > 1e-12) throw ConfigError("the circle |x| = R is not a grid circle");
  for (std::size_t i = 1; i < grid.nr(); ++i)
    if (std::abs(grid.r(i) - R) <= 2.0 * eps && grid.local_spacing(i) > 0.25 * eps)
      throw ConfigError("polar grid too coarse for eps near |x| = R");
  if (n > 1 && 2.0 * R * std::sin(std::numbers::pi / n) <= 4.0 * eps)
    throw ConfigError("pinned vortices too close: sectors overlap");
  if (R + 2.0 * eps >= 1.0 || R - 2.0 * eps <= 0.0) throw ConfigError("vortex cores leave the disc");

  PinnedConfiguration out;
  const std::size_t nr = grid.nr(), nt = grid.ntheta;
  auto& meas = out.measure;
  meas.eps = eps;
  for (int k = 0; k < n; ++k) {
    const double t = two_pi * k / n;
    meas.centers.push_back({R * std::cos(t), R * std::sin(t)});
  }
  auto nearest = [&](Point p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : meas.centers) best = std::min(best, distance(p, a));
    return best;
  };

  // mu: 2/eps^2 times the covered fraction of each control volume.
  meas.mu.assign(grid.size(), 0.0);
  meas.sector_mass.assign(static_cast<std::size_t>(n), 0.0);
  constexpr int sub = 16;
  for (std::size_t i = 1; i < nr; ++i) {
    if (std::abs(grid.r(i) - R) > eps + 2.0 * grid.local_spacing(i)) continue;
    const double r0 = grid.rho[i - 1], r1 = i + 1 < nr ? grid.rho[i] : 1.0;
    for (std::size_t j = 0; j < nt; ++j) {
      if (nearest({grid.x(i, j), grid.y(i, j)}) > eps + 2.0 * grid.local_spacing(i)) continue;
      double hit = 0.0, total = 0.0;
      for (int a = 0; a < sub; ++a) {
        const double r = r0 + (r1 - r0) * (a + 0.5) / sub;
        for (int b = 0; b < sub; ++b) {
          const double th = grid.theta(j) + grid.dtheta * ((b + 0.5) / sub - 0.5);
          total += r;
          if (nearest({r * std::cos(th), r * std::sin(th)}) < eps) hit += r;
        }
      }
      const double m = 2.0 / (eps * eps) * hit / total;
      meas.mu[grid.index(i, j)] = m;
      const auto sector = static_cast<std::size_t>(
          std::lround(grid.theta(j) * n / two_pi) % n);
      meas.sector_mass[sector] += m * grid.node_area[i];
    }
  }

  out.u_nodal = density_on_grid(profile, grid);
  out.h_prime = weighted_london_solve(grid, out.u_nodal, area_load(grid, meas.mu));

  std::vector<double> neg_h(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) neg_h[k] = -out.h_prime[k];
  const std::vector<double> ones_c(nr - 1, 1.0), ones_n(nr, 1.0);
  const PolarFvSolver laplace_d(grid, ones_c, ones_n, 0.0, Boundary::dirichlet);
  out.g = laplace_d.solve(area_load(grid, neg_h));

  // A' = grad-perp g in Cartesian components.
  const auto gr = radial_derivative(grid, out.g);
  const auto gt = angular_derivative(grid, out.g);
  auto& field = out.field;
  field.grid = grid;
  field.ax.assign(grid.size(), 0.0);
  field.ay.assign(grid.size(), 0.0);
  const Point g0 = origin_gradient(grid, out.g);
  for (std::size_t j = 0; j < nt; ++j) {
    field.ax[j] = -g0.y;
    field.ay[j] = g0.x;
  }
  for (std::size_t i = 1; i < nr; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t k = grid.index(i, j);
      const double ar = -gt[k] / grid.r(i), at = gr[k];
      const double th = grid.theta(j);
      field.ax[k] = ar * std::cos(th) - at * std::sin(th);
      field.ay[k] = ar * std::sin(th) + at * std::cos(th);
    }
  }

  // Phase: angle sum plus a least-squares single-valued correction chi whose
  // increments match V = A' - u^-2 grad-perp h' minus the angle-sum increments.
  const auto ht = angular_derivative(grid, out.h_prime);
  std::vector<double> flux_cell(grid.size(), 0.0);  // per (cell, column)
  for (std::size_t c = 0; c + 1 < nr; ++c) {
    const double kc = 1.0 / std::pow(u_at(out.u_nodal, c), 2);
    for (std::size_t j = 0; j < nt; ++j)
      flux_cell[c * nt + j] =
          kc * (out.h_prime[grid.index(c + 1, j)] - out.h_prime[grid.index(c, j)]) /
          grid.mesh.spacing(c);
  }
  auto node_flux = [&](std::size_t i, std::size_t j) {
    j %= nt;
    if (i + 1 == nr) return flux_cell[(i - 1) * nt + j];
    const double lo = grid.rho[i - 1], hi = grid.rho[i];
    const double t = (grid.r(i) - lo) / (hi - lo);
    return (1.0 - t) * flux_cell[(i - 1) * nt + j] + t * flux_cell[i * nt + j];
  };
  auto angle_increment = [&](std::size_t pi, std::size_t pj, std::size_t qi, std::size_t qj) {
    double s = 0.0;
    for (const auto& a : meas.centers) {
      const std::complex<double> za(grid.x(pi, pj) - a.x, grid.y(pi, pj) - a.y);
      const std::complex<double> zb(grid.x(qi, qj) - a.x, grid.y(qi, qj) - a.y);
      if (std::abs(za) < 1e-14 || std::abs(zb) < 1e-14) continue;
      s += phase_increment(za, zb);
    }
    return s;
  };

  const PolarFvSolver laplace_n(grid, ones_c, ones_n, 0.0, Boundary::neumann);
  std::vector<double> rhs(grid.size(), 0.0);
  struct Edge {
    std::size_t tail, head;
    double target;  // increment of the correction
    bool exterior;
  };
  std::vector<Edge> edges;
  edges.reserve(2 * grid.size());
  auto add_edge = [&](std::size_t tail, std::size_t head, double weight, double w) {
    rhs[head] += weight * w;
    rhs[tail] -= weight * w;
    const Point pt{grid.x(tail / nt, tail % nt), grid.y(tail / nt, tail % nt)};
    const Point ph{grid.x(head / nt, head % nt), grid.y(head / nt, head % nt)};
    edges.push_back({tail, head, w, std::min(nearest(pt), nearest(ph)) > 2.0 * eps});
  };
  for (std::size_t c = 0; c + 1 < nr; ++c) {
    const double kh = 1.0 / std::pow(u_at(out.u_nodal, c), 2);
    const double coef = laplace_n.radial_coefficient(c);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t p = c == 0 ? 0 : grid.index(c, j), q = grid.index(c + 1, j);
      const double tg = 0.5 * (gt[p] + gt[q]), th = 0.5 * (ht[p] + ht[q]);
      const double w = grid.mesh.spacing(c) / grid.rho[c] * (-tg + kh * th) -
                       angle_increment(c, j, c + 1, j);
      add_edge(p, q, coef, w);
    }
  }
  for (std::size_t i = 1; i < nr; ++i) {
    const double coef = laplace_n.angular_coefficient(i);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t p = grid.index(i, j), q = grid.index(i, j + 1);
      double dg = 0.5 * (gr[p] + gr[q]);
      if (i + 1 == nr) {
        // Face differences keep the boundary circulation equal to the flux balance.
        const double dr = grid.mesh.spacing(i - 1);
        dg = 0.5 * (out.g[p] + out.g[q] - out.g[grid.index(i - 1, j)] -
                    out.g[grid.index(i - 1, j + 1)]) / dr;
      }
      const double vt = dg - 0.5 * (node_flux(i, j) + node_flux(i, j + 1));
      const double len = (i + 1 == nr ? grid.rho[i - 1] : grid.r(i)) * grid.dtheta;
      const double w = len * vt - angle_increment(i, j, i, j + 1);
      add_edge(p, q, coef, w);
    }
  }
  // The origin's load is read from index 0 only.
  for (std::size_t j = 1; j < nt; ++j) {
    rhs[0] += rhs[j];
    rhs[j] = 0.0;
  }
  const auto chi = laplace_n.solve(rhs);
  double worst = 0.0, scale = 0.0;
  for (const auto& e : edges) {
    if (!e.exterior) continue;
    worst = std::max(worst, std::abs(chi[e.head] - chi[e.tail] - e.target));
    scale = std::max(scale, std::abs(e.target));
  }
  out.phase_residual = scale > 0.0 ? worst / scale : 0.0;
  field.values.resize(grid.size());
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t k = grid.index(i, j);
      const Point x = field.node(i, j);
      double phase = chi[k];
      double modulus = 1.0;
      for (const auto& a : meas.centers) {
        const double d = distance(x, a);
        if (d > 1e-14) phase += std::atan2(x.y - a.y, x.x - a.x);
        modulus = std::min(modulus, std::clamp((d - eps) / eps, 0.0, 1.0));
      }
      field.values[k] = std::polar(modulus, phase);
    }
  }
  for (const auto& a : meas.centers) out.windings.push_back(winding_number(field, a, 2.0 * eps));
  return out;
}

InteractionEnergy interaction_energy(const PolarGrid2D& grid, std::span<const double> u_nodal,
                                     std::span<const double> h_prime, std::span<const double> mu) {
  const std::size_t nt = grid.ntheta;
  InteractionEnergy e;
  for (std::size_t c = 0; c + 1 < grid.nr(); ++c) {
    const double rho = grid.rho[c], dr = grid.mesh.spacing(c);
    const double area = rho * dr * grid.dtheta;
    const double k = 1.0 / std::pow(u_at(u_nodal, c), 2);
    for (std::size_t j = 0; j < nt; ++j) {
      const double v00 = h_prime[grid.index(c, j)], v01 = h_prime[grid.index(c, j + 1)];
      const double v10 = h_prime[grid.index(c + 1, j)], v11 = h_prime[grid.index(c + 1, j + 1)];
      const double v = 0.25 * (v00 + v01 + v10 + v11);
      const double dvr = 0.5 * (v10 + v11 - v00 - v01) / dr;
      const double dvt = 0.5 * (v01 + v11 - v00 - v10) / (rho * grid.dtheta);
      e.primal += area * (k * (dvr * dvr + dvt * dvt) + v * v);
    }
  }
  e.dual = mu[0] * grid.node_area[0] * h_prime[0];
  for (std::size_t i = 1; i < grid.nr(); ++i)
    for (std::size_t j = 0; j < nt; ++j)
      e.dual += mu[grid.index(i, j)] * grid.node_area[i] * h_prime[grid.index(i, j)];
  const double scale = std::max(std::abs(e.primal), std::abs(e.dual));
  e.relative_difference = scale > 0.0 ? std::abs(e.primal - e.dual) / scale : 0.0;
  return e;
}

std::vector<double> green_column(GridPoint y, const PolarGrid2D& grid,
                                 std::span<const double> u_nodal) {
  if (y.row + 1 >= grid.nr()) throw ConfigError("green_column needs an interior point");
  std::vector<double> load(grid.size(), 0.0);
  load[y.row == 0 ? 0 : grid.index(y.row, y.column)] = 1.0;
  return weighted_london_solve(grid, u_nodal, load);
}

std::vector<std::vector<double>> green_columns(std::span<const GridPoint> ys,
                                               const PolarGrid2D& grid,
                                               std::span<const double> u_nodal,
                                               std::size_t jobs) {
  std::vector<std::vector<double>> out(ys.size());
  for (const auto& y : ys)
    if (y.row + 1 >= grid.nr()) throw ConfigError("green_column needs an interior point");
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(ys.size(), 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < ys.size(); k = next++) out[k] = green_column(ys[k], grid, u_nodal);
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return out;
}

double green_log_constant(const std::vector<double>& column, GridPoint y, const PolarGrid2D& grid) {
  const Point py{grid.x(y.row, y.column), grid.y(y.row, y.column)};
  const std::size_t self = y.row == 0 ? 0 : grid.index(y.row, y.column);
  double c = 0.0;
  auto visit = [&](std::size_t i, std::size_t j) {
    const std::size_t k = grid.index(i, j);
    if (k == self) return;
    const double d = distance(py, {grid.x(i, j), grid.y(i, j)});
    if (d <= 0.0) return;
    c = std::max(c, column[k] / (std::abs(std::log(d)) + 1.0));
  };
  visit(0, 0);
  for (std::size_t i = 1; i < grid.nr(); ++i)
    for (std::size_t j = 0; j < grid.ntheta; ++j) visit(i, j);
  return c;
}

}  // namespace glj
