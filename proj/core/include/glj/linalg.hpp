#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace glj {

/// Thomas algorithm for a general tridiagonal system. lower[i] couples row i
/// to i-1 (lower[0] unused), upper[i] couples row i to i+1.
/// Throws SolverError on a zero pivot.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

/// Symmetric matrix stored by its upper band: band[k][i] = A(i, i + k), k = 0..p.
class SymmetricBand {
 public:
  SymmetricBand(std::size_t n, std::size_t half_bandwidth);

  std::size_t size() const { return n_; }
  std::size_t half_bandwidth() const { return p_; }
  double& at(std::size_t i, std::size_t j);
  double get(std::size_t i, std::size_t j) const;
  void add_diagonal(std::span<const double> shift);
  std::vector<double> multiply(std::span<const double> x) const;

  /// In-place LDL^T without pivoting. Returns false (and leaves the matrix
  /// partially factored) as soon as a pivot is <= min_pivot.
  bool factor(double min_pivot);
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<std::vector<double>> band_;
  bool factored_ = false;
};

/// Sturm count: number of eigenvalues of the symmetric tridiagonal (diag, off)
/// strictly below x.
std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x);

}  // namespace glj
