#pragma once

#include <vector>

#include "mch/profile.hpp"

namespace mch::weakform {

/// Family of C-infinity bumps psi((xi - center)/width) with
/// psi(s) = exp(-1/(1-s^2)) on |s| < 1 and 0 outside.
struct TestFunctionFamily {
  std::vector<double> centers;
  std::vector<double> widths;

  /// count functions with supports spread across [lo, hi].
  static TestFunctionFamily spanning(double lo, double hi, int count);
};

double bump(double s);
double bump_second_derivative(double s);

/// Distributional residual of the traveling-wave identity
///   (phi')^2 + 2 phi^3 - 2 c phi - a = ((phi - c)^2)''
/// tested against the family: max over psi of
///   | I1 - I2 | / ||psi||_L2, with the second derivative moved onto psi.
/// Integrals use the profile's own grid, trapezoid with Richardson
/// extrapolation; phi is differentiated once by centered differences.
double weak_residual(const profile::WaveProfile& prof, const TestFunctionFamily& family);

/// sup over interior smooth samples of |(phi')^2 - F(phi)| / (1 + |F(phi)|),
/// excluding a 2-sample collar around crests, junctions and plateau edges.
double pointwise_residual(const profile::WaveProfile& prof);

struct TwReport {
  double plateau_measure = 0.0;       // total xi length where |phi - c| <= tol
  int smooth_segments = 0;            // maximal runs off the plateau set
  bool endpoint_limits_ok = false;    // phi -> c at finite segment endpoints
  bool plateau_a_consistent = false;  // TW2(ii): measure > 0 => a = 2c^3-2c^2
  double a_deviation = 0.0;           // |a - (2c^3 - 2c^2)|
  double tw3_refinement_ratio = 0.0;  // L1 of ((phi-c)^2)'' under 2x coarsening
  bool tw3_ok = false;

  bool pass() const { return endpoint_limits_ok && plateau_a_consistent && tw3_ok; }
};

/// Checks of the (TW1)-(TW3) side conditions on a sampled profile.
TwReport tw_conditions(const profile::WaveProfile& prof);

}  // namespace mch::weakform
