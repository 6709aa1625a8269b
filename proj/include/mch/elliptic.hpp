#pragma once

#include "mch/errors.hpp"

namespace mch::elliptic {

/// Modulus pair (k, k') with k^2 + k'^2 = 1 and 0 <= k^2 < 1.
struct Modulus {
  double k;
  double k_prime;
  explicit Modulus(double k_value);
};

/// Complete elliptic integral of the first kind, K(k), by AGM iteration.
double complete_K(double k);

/// Normal elliptic integral of the first kind F(phi, k). Odd and strictly
/// increasing in phi; extended past [-pi/2, pi/2] through
/// F(phi + n*pi, k) = F(phi, k) + 2*n*K(k).
double incomplete_F(double phi, double k);

/// Amplitude am(u, k): the functional inverse of phi -> F(phi, k).
/// Inverted by bisection on [0, pi/2] followed by Newton refinement.
double amplitude(double u, double k);

inline constexpr double tn_pole_tol = 1e-13;

struct JacobiTriple {
  double sn;
  double cn;
  double tn;     // +-inf when cn vanishes
  bool tn_pole;  // |cn| fell below tn_pole_tol; crest-detection signal
};

/// sn, cn, tn at argument u and modulus k. tn carries a pole flag instead of
/// crashing so callers can detect crest approach explicitly.
JacobiTriple jacobi(double u, double k);

}  // namespace mch::elliptic
