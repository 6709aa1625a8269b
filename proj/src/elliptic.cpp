#include "mch/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mch::elliptic {

namespace {

constexpr double pi = std::numbers::pi;

void require_modulus(double k) {
  if (!std::isfinite(k) || k * k >= 1.0)
    throw domain_error("elliptic: modulus must satisfy 0 <= k^2 < 1");
}

// Carlson symmetric integral R_F by the duplication theorem.
double carlson_rf(double x, double y, double z) {
  double xt = x, yt = y, zt = z;
  double mu = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
    const double lam = sx * (sy + sz) + sy * sz;
    xt = 0.25 * (xt + lam);
    yt = 0.25 * (yt + lam);
    zt = 0.25 * (zt + lam);
    mu = (xt + yt + zt) / 3.0;
    dx = (mu - xt) / mu;
    dy = (mu - yt) / mu;
    dz = (mu - zt) / mu;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < 1.2e-3) break;
  }
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(mu);
}

// F on the principal branch phi in [-pi/2, pi/2].
double incomplete_principal(double phi, double k) {
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  return s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0);
}

}  // namespace

Modulus::Modulus(double k_value) : k(k_value), k_prime(0.0) {
  require_modulus(k_value);
  k_prime = std::sqrt(1.0 - k_value * k_value);
}

double complete_K(double k) {
  require_modulus(k);
  double a = 1.0;
  double b = std::sqrt(1.0 - k * k);
  while (std::abs(a - b) > 1e-15 * a) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return pi / (2.0 * a);
}

double incomplete_F(double phi, double k) {
  require_modulus(k);
  if (!std::isfinite(phi)) throw domain_error("elliptic: argument must be finite");
  if (k == 0.0) return phi;
  const double n = std::round(phi / pi);
  const double phi0 = phi - n * pi;
  double value = incomplete_principal(phi0, k);
  if (n != 0.0) value += 2.0 * n * complete_K(k);
  return value;
}

double amplitude(double u, double k) {
  require_modulus(k);
  if (!std::isfinite(u)) throw domain_error("elliptic: argument must be finite");
  if (k == 0.0) return u;
  if (u < 0.0) return -amplitude(-u, k);

  const double K = complete_K(k);
  // am(u + 2K) = am(u) + pi, and am(2K - u) = pi - am(u) on [0, 2K].
  const double cycles = std::floor(u / (2.0 * K));
  double ub = u - 2.0 * K * cycles;
  bool mirrored = false;
  if (ub > K) {
    ub = 2.0 * K - ub;
    mirrored = true;
  }

  // Bisection bracket on [0, pi/2]: F is strictly increasing.
  double lo = 0.0, hi = pi / 2.0;
  for (int it = 0; it < 20; ++it) {
    const double mid = 0.5 * (lo + hi);
    (incomplete_principal(mid, k) < ub ? lo : hi) = mid;
  }
  // Newton refinement: d/dphi F(phi, k) = 1/sqrt(1 - k^2 sin^2 phi).
  double phi = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double s = std::sin(phi);
    const double f = incomplete_principal(phi, k) - ub;
    const double step = f * std::sqrt(1.0 - k * k * s * s);
    phi = std::clamp(phi - step, 0.0, pi / 2.0);
    if (std::abs(step) < 1e-16) break;
  }

  if (mirrored) phi = pi - phi;
  return phi + pi * cycles;
}

JacobiTriple jacobi(double u, double k) {
  const double am = amplitude(u, k);
  JacobiTriple out{};
  out.sn = std::sin(am);
  out.cn = std::cos(am);
  out.tn_pole = std::abs(out.cn) <= tn_pole_tol;
  out.tn = out.sn / out.cn;
  return out;
}

}  // namespace mch::elliptic
