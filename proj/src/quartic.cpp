#include "mch/quartic.hpp"
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

namespace mch::quartic {

namespace {

// Monic form used for root finding: phi^4 - 2c phi^2 - 2a phi - 2d.
struct Monic {
  double c2, c1, c0;
  std::complex<double> eval(std::complex<double> x) const {
    return ((x * x + c2) * x + c1) * x + c0;
  }
  std::complex<double> deriv(std::complex<double> x) const {
    return (4.0 * x * x + 2.0 * c2) * x + c1;
  }
  double deriv2(double x) const { return 12.0 * x * x + 2.0 * c2; }
};

double root_scale(double x) { return 1.0 + std::abs(x); }

void polish(const Monic& p, std::complex<double>& x) {
  for (int it = 0; it < 2; ++it) {
    const auto dp = p.deriv(x);
    if (std::abs(dp) < 1e-12 * root_scale(std::abs(x))) return;  // double root, leave it
    x -= p.eval(x) / dp;
  }
}

// Newton on p' pins a double root far more accurately than Newton on p.
double polish_double(const Monic& p, double x) {
  for (int it = 0; it < 3; ++it) {
    const double d2 = p.deriv2(x);
    if (std::abs(d2) < 1e-10) break;
    x -= p.deriv(std::complex<double>(x, 0.0)).real() / d2;
  }
  return x;
}

double e2_of(const std::array<std::complex<double>, 4>& rt) {
  std::complex<double> s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) s += rt[i] * rt[j];
  return s.real();
}
double e3_of(const std::array<std::complex<double>, 4>& rt) {
  std::complex<double> s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) s += rt[i] * rt[j] * rt[k];
  return s.real();
}
double e4_of(const std::array<std::complex<double>, 4>& rt) {
  return (rt[0] * rt[1] * rt[2] * rt[3]).real();
}

std::array<std::complex<double>, 4> as_root_array(const RootStructure& roots) {
  if (const auto* fr = std::get_if<FourReal>(&roots))
    return {std::complex<double>(fr->z), fr->r, fr->m, fr->M};
  if (const auto* tr = std::get_if<TwoRealPair>(&roots))
    return {std::complex<double>(tr->m), tr->M, tr->z, std::conj(tr->z)};
  const auto& dr = std::get<DoubleRealPair>(roots);
  return {std::complex<double>(dr.m), dr.m, dr.z, std::conj(dr.z)};
}

}  // namespace

RootStructure find_roots(const Polynomial& poly) {
  if (!std::isfinite(poly.c) || !std::isfinite(poly.a) || !std::isfinite(poly.d))
    throw domain_error("quartic: coefficients must be finite");

  const Monic p{-2.0 * poly.c, -2.0 * poly.a, -2.0 * poly.d};

  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
  companion(0, 3) = -p.c0;
  companion(1, 3) = -p.c1;
  companion(2, 3) = -p.c2;
  companion(3, 3) = 0.0;  // no cubic term

  Eigen::EigenSolver<Eigen::Matrix4d> solver(companion, /*computeEigenvectors=*/false);
  std::array<std::complex<double>, 4> roots;
  for (int i = 0; i < 4; ++i) roots[i] = solver.eigenvalues()(i);
  for (auto& x : roots) polish(p, x);

  // Eigenvalues of a near-double root scatter by O(sqrt(eps)); resolve every
  // near-axis pair through a local quadratic model at the adjacent critical
  // point of p, which pins the pair to machine accuracy before snapping.
  std::vector<double> real_roots;
  std::vector<std::pair<double, double>> near_axis;  // (x, |Im|) candidates
  std::vector<std::complex<double>> complex_roots;
  for (const auto& x : roots) {
    const double near_tol = 1e-5 * root_scale(std::abs(x));
    if (std::abs(x.imag()) <= near_tol)
      near_axis.emplace_back(x.real(), std::abs(x.imag()));
    else
      complex_roots.push_back(x);
  }

  // Group near-axis values into clusters; a cluster of two is a candidate
  // double root, singletons are plain real roots.
  std::sort(near_axis.begin(), near_axis.end());
  for (std::size_t i = 0; i < near_axis.size();) {
    const double xi = near_axis[i].first;
    const bool paired = i + 1 < near_axis.size() &&
                        (near_axis[i + 1].first - xi <= 1e-5 * root_scale(xi)) &&
                        std::max(near_axis[i].second, near_axis[i + 1].second) <=
                            1e-5 * root_scale(xi);
    if (!paired) {
      // isolated: genuinely real only if the imaginary part is negligible
      if (near_axis[i].second > root_snap_tol * root_scale(xi))
        throw domain_error("quartic: root classification is ambiguous at the snapping tolerance");
      real_roots.push_back(xi);
      ++i;
      continue;
    }
    // local model around the critical point: p ~ p(x*) + p''(x*)(x - x*)^2 / 2
    const double xc = polish_double(p, 0.5 * (xi + near_axis[i + 1].first));
    const double d2 = p.deriv2(xc);
    if (std::abs(d2) < 1e-12) {
      // triple-root territory; fall back to the raw values
      real_roots.push_back(xi);
      real_roots.push_back(near_axis[i + 1].first);
      i += 2;
      continue;
    }
    const double disc = -2.0 * p.eval(std::complex<double>(xc, 0.0)).real() / d2;
    const double split = std::sqrt(std::abs(disc));
    // splits below the evaluation noise floor of p are not measurable from
    // the coefficients and count as exact doubles
    const double ax = std::abs(xc);
    const double errbound = std::numeric_limits<double>::epsilon() *
                            (ax * ax * ax * ax + std::abs(p.c2) * ax * ax +
                             std::abs(p.c1) * ax + std::abs(p.c0) + 1.0);
    const double noise = std::sqrt(128.0 * errbound / std::abs(d2));
    const double tol = std::max(root_snap_tol * root_scale(xc), noise);
    if (split <= tol) {
      real_roots.push_back(xc);  // double root
      real_roots.push_back(xc);
    } else if (split <= 3.0 * tol) {
      throw domain_error("quartic: root classification is ambiguous at the snapping tolerance");
    } else if (disc > 0.0) {
      real_roots.push_back(xc - split);
      real_roots.push_back(xc + split);
    } else {
      complex_roots.push_back({xc, split});
      complex_roots.push_back({xc, -split});
    }
    i += 2;
  }
  std::sort(real_roots.begin(), real_roots.end());

  if (real_roots.size() == 4) {
    return FourReal{real_roots[0], real_roots[1], real_roots[2], real_roots[3]};
  }
  if (real_roots.size() == 2 && complex_roots.size() == 2) {
    std::complex<double> z = complex_roots[0].imag() > 0 ? complex_roots[0] : complex_roots[1];
    // average the conjugate pair to strip asymmetric numerical noise
    const std::complex<double> zbar =
        complex_roots[0].imag() > 0 ? complex_roots[1] : complex_roots[0];
    z = 0.5 * (z + std::conj(zbar));
    const double gap = std::abs(real_roots[1] - real_roots[0]);
    if (gap <= 2.0 * root_snap_tol * root_scale(std::abs(real_roots[0]))) {
      const double m = polish_double(p, 0.5 * (real_roots[0] + real_roots[1]));
      return DoubleRealPair{m, z};
    }
    return TwoRealPair{real_roots[0], real_roots[1], z};
  }
  if (real_roots.empty())
    throw domain_error("quartic: no real zeros; outside the classified structures");
  throw domain_error("quartic: root classification is ambiguous at the snapping tolerance");
}

Polynomial from_roots(const RootStructure& roots) {
  const auto rt = as_root_array(roots);
  std::complex<double> sum = 0.0;
  double scale = 1.0;
  for (const auto& x : rt) {
    sum += x;
    scale = std::max(scale, std::abs(x));
  }
  if (std::abs(sum) > 1e-7 * scale)
    throw domain_error("quartic: roots must sum to zero (no cubic term)");
  Polynomial poly;
  poly.c = -0.5 * e2_of(rt);
  poly.a = 0.5 * e3_of(rt);
  poly.d = -0.5 * e4_of(rt);
  return poly;
}

double recover_d(const RootStructure& roots) { return from_roots(roots).d; }

double constraint_residual(QuadricFamily family, double m, double M, double aux, double c) {
  switch (family) {
    case QuadricFamily::ellipsoid:
      return aux * aux + m * m + M * M + aux * m + aux * M + m * M - 2.0 * c;
    case QuadricFamily::hyperboloid:
      return 1.25 * m * m + 1.25 * M * M - aux * aux + 1.5 * m * M - 2.0 * c;
  }
  throw domain_error("quartic: unknown constraint family");
}

double integration_constant_a(QuadricFamily family, double m, double M, double aux) {
  switch (family) {
    case QuadricFamily::ellipsoid: {
      const double r = aux;
      return 0.5 * (-(M + m) * r * r - (m + r) * M * M - (M + r) * m * m - 2.0 * m * r * M);
    }
    case QuadricFamily::hyperboloid: {
      // |z|^2 in the surface's own convention; the stumpon points then carry
      // a = 2c^3 - 2c^2 as the taxonomy requires.
      const double re = -0.5 * (m + M);
      const double mod2 = aux * aux - re * re;
      return 0.5 * (M + m) * (mod2 - m * M);
    }
  }
  throw domain_error("quartic: unknown constraint family");
}

QuadricAxes reduced_form_axes(QuadricFamily family, double c) {
  Eigen::Matrix3d q;
  if (family == QuadricFamily::ellipsoid) {
    if (!(c > 0.0)) throw domain_error("quartic: ellipsoid requires c > 0");
    q << 1.0, 0.5, 0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 1.0;
  } else {
    if (!(c < 0.0)) throw domain_error("quartic: hyperboloid requires c < 0");
    q << 1.25, 0.75, 0.0, 0.75, 1.25, 0.0, 0.0, 0.0, -1.0;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(q);
  QuadricAxes out{};
  out.positive = 0;
  for (int i = 0; i < 3; ++i) {
    const double alpha = eig.eigenvalues()(i) / (2.0 * c);  // x'Qx = 2c, normalized to 1
    if (alpha > 0.0) ++out.positive;
    out.axes[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(std::abs(alpha));
  }
  std::sort(out.axes.begin(), out.axes.end(), std::greater<>());
  return out;
}

}  // namespace mch::quartic
