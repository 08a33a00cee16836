#include "glj/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "glj/error.hpp"

namespace glj {

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n, 0.0);
  std::vector<double> x(rhs.begin(), rhs.end());
  double pivot = diag[0];
  if (pivot == 0.0) throw SolverError("tridiagonal solve: zero pivot at row 0", 0.0);
  c[0] = n > 1 ? upper[0] / pivot : 0.0;
  x[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw SolverError("tridiagonal solve: zero pivot at row " + std::to_string(i), 0.0);
    }
    if (i + 1 < n) c[i] = upper[i] / pivot;
    x[i] = (x[i] - lower[i] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

SymmetricBand::SymmetricBand(std::size_t n, std::size_t half_bandwidth)
    : n_(n), p_(half_bandwidth), band_(half_bandwidth + 1, std::vector<double>(n, 0.0)) {}

double& SymmetricBand::at(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return band_[j - i][i];
}

double SymmetricBand::get(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  if (j - i > p_) return 0.0;
  return band_[j - i][i];
}

void SymmetricBand::add_diagonal(std::span<const double> shift) {
  for (std::size_t i = 0; i < n_; ++i) band_[0][i] += shift[i];
}

std::vector<double> SymmetricBand::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    y[i] += band_[0][i] * x[i];
    for (std::size_t k = 1; k <= p_ && i + k < n_; ++k) {
      y[i] += band_[k][i] * x[i + k];
      y[i + k] += band_[k][i] * x[i];
    }
  }
  return y;
}

// After factoring, band_[0][i] = D_i and band_[k][i] = L(i + k, i).
bool SymmetricBand::factor(double min_pivot) {
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t k0 = j > p_ ? j - p_ : 0;
    double dj = band_[0][j];
    for (std::size_t k = k0; k < j; ++k) {
      const double l = band_[j - k][k];
      dj -= l * l * band_[0][k];
    }
    if (!(dj > min_pivot)) return false;
    band_[0][j] = dj;
    for (std::size_t i = j + 1; i < std::min(n_, j + p_ + 1); ++i) {
      double s = band_[i - j][j];
      const std::size_t m0 = i > p_ ? i - p_ : 0;
      for (std::size_t k = std::max(k0, m0); k < j; ++k) {
        s -= band_[i - k][k] * band_[j - k][k] * band_[0][k];
      }
      band_[i - j][j] = s / dj;
    }
  }
  factored_ = true;
  return true;
}

std::vector<double> SymmetricBand::solve(std::span<const double> rhs) const {
  if (!factored_) throw SolverError("banded solve called before a successful factorization", 0.0);
  std::vector<double> x(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 1; k <= p_ && k <= i; ++k) x[i] -= band_[k][i - k] * x[i - k];
  }
  for (std::size_t i = 0; i < n_; ++i) x[i] /= band_[0][i];
  for (std::size_t i = n_; i-- > 0;) {
    for (std::size_t k = 1; k <= p_ && i + k < n_; ++k) x[i] -= band_[k][i] * x[i + k];
  }
  return x;
}

std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double b2 = i > 0 ? off[i - 1] * off[i - 1] : 0.0;
    q = diag[i] - x - (i > 0 ? b2 / q : 0.0);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(diag[i]) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace glj
