#pragma once

#include <complex>

#include "mch/quartic.hpp"

namespace mch {

enum class RootFamily { four_real, two_real };

/// Labeled traveling-wave parameters: the wave's extremum labels (m, M), the
/// remaining zeros of P, the speed c and the integration constants (a, d).
/// Roots are the source of truth; (c, a, d) are derived from them.
struct WaveParameters {
  RootFamily family = RootFamily::four_real;
  double m = 0.0;
  double M = 0.0;
  double r = 0.0;           // four_real only
  std::complex<double> z;   // four_real keeps the real root in z.real()
  double c = 0.0;
  double a = 0.0;
  double d = 0.0;

  /// Four real roots. They must sum to zero; c, a, d follow from expansion.
  static WaveParameters four_roots(double z, double r, double m, double M);

  /// Two real roots plus a conjugate pair (Re z must equal -(m+M)/2).
  static WaveParameters two_roots(double m, double M, std::complex<double> z);

  /// Two-real family point (m, M, c): the conjugate pair is pinned by
  /// |z|^2 = m^2 + M^2 + mM - 2c and Re z = -(m+M)/2.
  static WaveParameters two_real_from_speed(double m, double M, double c);

  quartic::Polynomial polynomial() const;
  quartic::RootStructure root_structure() const;

  /// Largest and smallest value a crest-up bounded wave can attain.
  double top() const { return std::min(M, c); }
  double bottom() const { return m; }
};

/// Do the labeled roots reproduce (c, a, d) through the factorization with
/// leading coefficient -1/2?
bool params_consistent(const WaveParameters& params, double rel_tol = 1e-9);

}  // namespace mch
