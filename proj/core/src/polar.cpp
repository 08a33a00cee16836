#include "glj/polar.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "glj/error.hpp"
#include "glj/linalg.hpp"

namespace glj {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (ptr == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

// One forward and one backward plan per angular size, shared by all solvers.
struct RowPlans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~RowPlans() {
    std::lock_guard lock(fftw_planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

std::shared_ptr<RowPlans> row_plans(std::size_t n) {
  static std::mutex cache_mutex;
  static std::vector<std::pair<std::size_t, std::shared_ptr<RowPlans>>> cache;
  std::lock_guard cache_lock(cache_mutex);
  for (auto& [size, plans] : cache)
    if (size == n) return plans;
  auto plans = std::make_shared<RowPlans>();
  FftwBuffer real(sizeof(double) * n);
  FftwBuffer spec(sizeof(fftw_complex) * (n / 2 + 1));
  {
    std::lock_guard lock(fftw_planner_mutex());
    const int ni = static_cast<int>(n);
    plans->forward = fftw_plan_dft_r2c_1d(ni, static_cast<double*>(real.ptr),
                                          static_cast<fftw_complex*>(spec.ptr), FFTW_ESTIMATE);
    plans->backward = fftw_plan_dft_c2r_1d(ni, static_cast<fftw_complex*>(spec.ptr),
                                           static_cast<double*>(real.ptr), FFTW_ESTIMATE);
  }
  if (!plans->forward || !plans->backward) throw SolverError("FFTW planning failed", 0.0);
  cache.emplace_back(n, plans);
  return plans;
}

}  // namespace

double PolarGrid2D::x(std::size_t i, std::size_t j) const { return r(i) * std::cos(theta(j)); }
double PolarGrid2D::y(std::size_t i, std::size_t j) const { return r(i) * std::sin(theta(j)); }

double PolarGrid2D::dual_length(std::size_t i) const {
  if (i == 0) return rho[0];
  if (i + 1 == nr()) return 1.0 - rho[i - 1];
  return rho[i] - rho[i - 1];
}

double PolarGrid2D::local_spacing(std::size_t i) const {
  double h = r(i) * dtheta;
  if (i > 0) h = std::max(h, mesh.spacing(i - 1));
  if (i + 1 < nr()) h = std::max(h, mesh.spacing(i));
  return h;
}

PolarGrid2D make_polar_grid(const RadialMesh& mesh, std::size_t ntheta) {
  if (ntheta < 64 || ntheta % 2 != 0)
    throw ConfigError("ntheta must be even and at least 64");
  if (mesh.size() < 3) throw ConfigError("radial mesh too small for a polar grid");
  PolarGrid2D grid;
  grid.mesh = mesh;
  grid.ntheta = ntheta;
  grid.dtheta = 2.0 * std::numbers::pi / static_cast<double>(ntheta);
  const std::size_t n = mesh.size();
  grid.rho.resize(n - 1);
  for (std::size_t c = 0; c + 1 < n; ++c) grid.rho[c] = mesh.midpoint(c);
  grid.node_area.resize(n);
  grid.node_area[0] = std::numbers::pi * grid.rho[0] * grid.rho[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double outer = i + 1 < n ? grid.rho[i] : 1.0;
    const double inner = grid.rho[i - 1];
    grid.node_area[i] = 0.5 * grid.dtheta * (outer * outer - inner * inner);
  }
  return grid;
}

template <class T>
T interpolate_polar(const PolarGrid2D& grid, std::span<const T> v, double x, double y) {
  const double r = std::hypot(x, y);
  if (r > 1.0 + 1e-12) throw ConfigError("interpolation point outside the disc");
  const std::size_t c = grid.mesh.locate(std::min(r, 1.0));
  const double t = std::clamp((r - grid.r(c)) / grid.mesh.spacing(c), 0.0, 1.0);
  double theta = std::atan2(y, x);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  const double s = theta / grid.dtheta;
  const auto j0 = static_cast<std::size_t>(std::floor(s)) % grid.ntheta;
  const double f = s - std::floor(s);
  const std::size_t j1 = (j0 + 1) % grid.ntheta;
  const T inner = (1.0 - f) * v[grid.index(c, j0)] + f * v[grid.index(c, j1)];
  const T outer = (1.0 - f) * v[grid.index(c + 1, j0)] + f * v[grid.index(c + 1, j1)];
  return (1.0 - t) * inner + t * outer;
}

template double interpolate_polar<double>(const PolarGrid2D&, std::span<const double>, double,
                                          double);
template std::complex<double> interpolate_polar<std::complex<double>>(
    const PolarGrid2D&, std::span<const std::complex<double>>, double, double);

PolarFvSolver::PolarFvSolver(const PolarGrid2D& grid, std::vector<double> kappa_cell,
                             std::vector<double> kappa_node, double c, Boundary boundary)
    : grid_(&grid), c_(c), boundary_(boundary) {
  const std::size_t n = grid.nr();
  if (kappa_cell.size() != n - 1 || kappa_node.size() != n)
    throw ConfigError("coefficient sizes do not match the polar grid");
  radial_.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k)
    radial_[k] = kappa_cell[k] * grid.rho[k] * grid.dtheta / grid.mesh.spacing(k);
  angular_.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    angular_[i] = kappa_node[i] * grid.dual_length(i) / (grid.r(i) * grid.dtheta);
}

std::vector<double> PolarFvSolver::solve(std::span<const double> load) const {
  const PolarGrid2D& g = *grid_;
  const std::size_t n = g.nr();
  const std::size_t nt = g.ntheta;
  const std::size_t nm = nt / 2 + 1;
  if (load.size() != g.size()) throw ConfigError("load size does not match the polar grid");

  const bool dirichlet = boundary_ == Boundary::dirichlet;
  const bool pinned = !dirichlet && c_ == 0.0;
  const std::size_t last = dirichlet ? n - 2 : n - 1;  // last unknown row
  const std::size_t rows = last;                        // rows 1..last

  auto plans = row_plans(nt);
  FftwBuffer real_buf(sizeof(double) * nt);
  FftwBuffer spec_buf(sizeof(fftw_complex) * nm);
  auto* real = static_cast<double*>(real_buf.ptr);
  auto* spec = static_cast<fftw_complex*>(spec_buf.ptr);

  // spectra[m * rows + (i - 1)]
  std::vector<std::complex<double>> spectra(nm * rows);
  for (std::size_t i = 1; i <= last; ++i) {
    std::copy_n(load.begin() + static_cast<std::ptrdiff_t>(g.index(i, 0)), nt, real);
    fftw_execute_dft_r2c(plans->forward, real, spec);
    for (std::size_t m = 0; m < nm; ++m)
      spectra[m * rows + i - 1] = {spec[m][0], spec[m][1]};
  }

  double origin_scaled = 0.0;  // n_theta * v_0
  std::vector<double> lower, diag, upper, re, im;
  for (std::size_t m = 0; m < nm; ++m) {
    const double lam = 2.0 - 2.0 * std::cos(static_cast<double>(m) * g.dtheta);
    const bool with_origin = m == 0 && !pinned;
    const std::size_t off = with_origin ? 1 : 0;
    const std::size_t size = rows + off;
    lower.assign(size, 0.0);
    diag.assign(size, 0.0);
    upper.assign(size, 0.0);
    re.assign(size, 0.0);
    im.assign(size, 0.0);
    if (with_origin) {
      diag[0] = radial_[0] + c_ * g.node_area[0] / static_cast<double>(nt);
      upper[0] = -radial_[0];
      re[0] = load[0];
    }
    for (std::size_t i = 1; i <= last; ++i) {
      const std::size_t k = i - 1 + off;
      double d = radial_[i - 1] + angular_[i] * lam + c_ * g.node_area[i];
      if (i + 1 < n) d += radial_[i];
      diag[k] = d;
      if (k > 0) lower[k] = -radial_[i - 1];
      if (i < last) upper[k] = -radial_[i];
      re[k] = spectra[m * rows + i - 1].real();
      im[k] = spectra[m * rows + i - 1].imag();
    }
    const auto xr = solve_tridiagonal(lower, diag, upper, re);
    const auto xi = solve_tridiagonal(lower, diag, upper, im);
    if (with_origin) origin_scaled = xr[0];
    for (std::size_t i = 1; i <= last; ++i)
      spectra[m * rows + i - 1] = {xr[i - 1 + off], xi[i - 1 + off]};
  }

  std::vector<double> v(g.size(), 0.0);
  const double inv = 1.0 / static_cast<double>(nt);
  std::fill_n(v.begin(), nt, origin_scaled * inv);
  for (std::size_t i = 1; i <= last; ++i) {
    for (std::size_t m = 0; m < nm; ++m) {
      spec[m][0] = spectra[m * rows + i - 1].real();
      spec[m][1] = spectra[m * rows + i - 1].imag();
    }
    spec[0][1] = 0.0;
    spec[nm - 1][1] = 0.0;
    fftw_execute_dft_c2r(plans->backward, spec, real);
    for (std::size_t j = 0; j < nt; ++j) v[g.index(i, j)] = real[j] * inv;
  }
  return v;
}

std::vector<double> PolarFvSolver::apply(std::span<const double> v) const {
  const PolarGrid2D& g = *grid_;
  const std::size_t n = g.nr();
  const std::size_t nt = g.ntheta;
  std::vector<double> out(g.size(), 0.0);
  const double v0 = v[0];
  double origin = c_ * g.node_area[0] * v0;
  for (std::size_t j = 0; j < nt; ++j) origin += radial_[0] * (v0 - v[g.index(1, j)]);
  out[0] = origin;
  const std::size_t last = boundary_ == Boundary::dirichlet ? n - 2 : n - 1;
  for (std::size_t i = 1; i <= last; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const double vij = v[g.index(i, j)];
      const double inner = i == 1 ? v0 : v[g.index(i - 1, j)];
      double s = radial_[i - 1] * (vij - inner) + c_ * g.node_area[i] * vij;
      if (i + 1 < n) s += radial_[i] * (vij - v[g.index(i + 1, j)]);
      s += angular_[i] * (2.0 * vij - v[g.index(i, j + 1)] - v[g.index(i, j + nt - 1)]);
      out[g.index(i, j)] = s;
    }
  }
  return out;
}

double PolarFvSolver::energy(std::span<const double> v) const {
  const PolarGrid2D& g = *grid_;
  const std::size_t n = g.nr();
  const std::size_t nt = g.ntheta;
  double e = c_ * g.node_area[0] * v[0] * v[0];
  for (std::size_t j = 0; j < nt; ++j) {
    const double dv = v[g.index(1, j)] - v[0];
    e += radial_[0] * dv * dv;
  }
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const double vij = v[g.index(i, j)];
      e += c_ * g.node_area[i] * vij * vij;
      if (i + 1 < n) {
        const double dr = v[g.index(i + 1, j)] - vij;
        e += radial_[i] * dr * dr;
      }
      const double dt = v[g.index(i, j + 1)] - vij;
      e += angular_[i] * dt * dt;
    }
  }
  return e;
}

}  // namespace glj
