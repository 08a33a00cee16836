#pragma once

#include <array>
#include <span>

namespace glj {

/// Matching constants of the flat-junction profile with a normal layer of
/// half-thickness d (in units of the coherence length).
struct CanonicalConstants {
  double a = 0.0;
  double d = 0.0;
  double beta = 0.0;
  /// Inner-branch amplitude: U = a_tilde * (e^{sqrt(a) x} + e^{-sqrt(a) x}) on |x| < d.
  double a_tilde = 0.0;
  double b_aux = 0.0;  // e^{sqrt(a) d} + e^{-sqrt(a) d}
  double c_aux = 0.0;  // sqrt(a) (e^{sqrt(a) d} - e^{-sqrt(a) d})

  /// beta * e^{sqrt(2) d}; the positive root of X^2 - 2 sqrt(2) (b/c) X - 1.
  double x_root() const;
  /// Value of the profile on the interfaces |x| = d.
  double interface_value() const;
};

/// Constants of the half-plane profile V (normal material on t < 0).
struct HalfPlaneConstants {
  double a = 0.0;
  double beta_inf = 0.0;
  double a_inf = 0.0;
};

/// de Gennes transfer data: (U'(d), U(d)) = matrix * (U'(-d), U(-d)).
struct DeGennesData {
  double kappa = 0.0;
  std::array<std::array<double, 2>, 2> matrix{};
};

CanonicalConstants compute_constants(double a, double d);
HalfPlaneConstants half_plane_constants(double a);

double profile_U(const CanonicalConstants& k, double x2);
double profile_U_derivative(const CanonicalConstants& k, double x2);
double profile_U_second_derivative(const CanonicalConstants& k, double x2);

double profile_V(const HalfPlaneConstants& k, double t);
double profile_V_derivative(const HalfPlaneConstants& k, double t);

/// 2 sqrt(a) (e^{2 sqrt(a) d} - 1) / (e^{2 sqrt(a) d} + 1), evaluated as
/// 2 sqrt(a) tanh(sqrt(a) d). Admits d = 0.
double degennes_coefficient(double a, double d);
DeGennesData degennes_matrix(double a, double d);

/// Residuals of the two matching equations for the stored (beta, a_tilde).
std::array<double, 2> matching_residuals(const CanonicalConstants& k);

struct CanonicalResidual {
  double ode = 0.0;        // max |ODE residual| over the samples
  double interface = 0.0;  // max of the value/derivative mismatch at |x| = d
  double max() const { return ode > interface ? ode : interface; }
};

/// Branch-wise ODE residual at the sample points plus the transmission
/// mismatch at x = +-d. Points with |x| == d are skipped for the ODE part.
CanonicalResidual residual_canonical(const CanonicalConstants& k,
                                     std::span<const double> sample_points);

}  // namespace glj
