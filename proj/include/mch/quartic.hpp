#pragma once

#include <array>
#include <complex>
#include <variant>

#include "mch/errors.hpp"

namespace mch::quartic {

/// P(phi) = phi^2 (c - phi^2/2) + a*phi + d. The leading coefficient is -1/2
/// and the cubic term vanishes, so the four roots always sum to zero and
/// c = (sum of squared roots)/4.
struct Polynomial {
  double c = 0.0;
  double a = 0.0;
  double d = 0.0;

  double operator()(double phi) const {
    // Horner form of -phi^4/2 + c*phi^2 + a*phi + d
    return ((-0.5 * phi * phi + c) * phi + a) * phi + d;
  }
};

struct FourReal {  // z <= r <= m <= M, ascending
  double z, r, m, M;
};
struct TwoRealPair {  // m <= M real, z the conjugate-pair member with Im z > 0
  double m, M;
  std::complex<double> z;
};
struct DoubleRealPair {  // double real root m plus a conjugate pair
  double m;
  std::complex<double> z;
};
using RootStructure = std::variant<FourReal, TwoRealPair, DoubleRealPair>;

/// Relative tolerance for snapping an almost-real conjugate pair to a real
/// double root and for merging nearly equal real roots.
inline constexpr double root_snap_tol = 1e-9;

/// Classified zero set of P via companion-matrix eigenvalues with one Newton
/// polish per root. Throws domain_error when the structure is ambiguous under
/// the snapping tolerance.
RootStructure find_roots(const Polynomial& poly);

/// Expand the factored form with leading coefficient -1/2 back into (c, a, d).
Polynomial from_roots(const RootStructure& roots);

/// Constant term d forced by the factorization.
double recover_d(const RootStructure& roots);

enum class QuadricFamily { hyperboloid, ellipsoid };

/// Residual of the gluing-surface equation at (m, M, aux):
///   ellipsoid    aux = r:     r^2 + m^2 + M^2 + rm + rM + mM - 2c
///   hyperboloid  aux = Im z:  (5/4)m^2 + (5/4)M^2 - Im(z)^2 + (3/2)mM - 2c
double constraint_residual(QuadricFamily family, double m, double M, double aux, double c);

/// Integration constant from the surface point:
///   ellipsoid:   2a = -(M+m)r^2 - (m+r)M^2 - (M+r)m^2 - 2mrM
///   hyperboloid: 2a = (M+m)(|z|^2 - mM) with the surface's own modulus
///                convention |z|^2 = Im(z)^2 - ((m+M)/2)^2.
/// Requires constraint_residual <= 1e-8 at the point.
double integration_constant_a(QuadricFamily family, double m, double M, double aux);

/// Semi-axes of the constraint quadric at speed c, obtained by numerically
/// diagonalizing the quadratic form (never from hard-coded axes). `axes` is
/// sorted descending; `positive` counts the +1 directions of the signature.
struct QuadricAxes {
  std::array<double, 3> axes;
  int positive;
};
QuadricAxes reduced_form_axes(QuadricFamily family, double c);

}  // namespace mch::quartic
