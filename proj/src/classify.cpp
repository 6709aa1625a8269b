#include "mch/classify.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace mch {

namespace {

double coeff_scale(const quartic::Polynomial& p) {
  return std::max({1.0, std::abs(p.c), std::abs(p.a), std::abs(p.d)});
}

}  // namespace

WaveParameters WaveParameters::four_roots(double z, double r, double m, double M) {
  const auto poly = quartic::from_roots(quartic::FourReal{z, r, m, M});
  WaveParameters p;
  p.family = RootFamily::four_real;
  p.m = m;
  p.M = M;
  p.r = r;
  p.z = {z, 0.0};
  p.c = poly.c;
  p.a = poly.a;
  p.d = poly.d;
  return p;
}

WaveParameters WaveParameters::two_roots(double m, double M, std::complex<double> z) {
  if (z.imag() == 0.0) throw domain_error("two_roots: conjugate pair must be non-real");
  if (z.imag() < 0.0) z = std::conj(z);
  const double scale = std::max({1.0, std::abs(m), std::abs(M), std::abs(z)});
  if (std::abs(z.real() + 0.5 * (m + M)) > 1e-7 * scale)
    throw domain_error("two_roots: Re z must equal -(m+M)/2");
  const auto poly = quartic::from_roots(quartic::TwoRealPair{m, M, z});
  WaveParameters p;
  p.family = RootFamily::two_real;
  p.m = m;
  p.M = M;
  p.z = z;
  p.c = poly.c;
  p.a = poly.a;
  p.d = poly.d;
  return p;
}

WaveParameters WaveParameters::two_real_from_speed(double m, double M, double c) {
  const double mod2 = m * m + M * M + m * M - 2.0 * c;
  const double re = -0.5 * (m + M);
  const double im2 = mod2 - re * re;
  if (im2 <= 0.0)
    throw domain_error("two_real_from_speed: point has four real roots; use the four-real family");
  return two_roots(m, M, {re, std::sqrt(im2)});
}

quartic::Polynomial WaveParameters::polynomial() const { return {c, a, d}; }

quartic::RootStructure WaveParameters::root_structure() const {
  if (family == RootFamily::four_real) {
    std::array<double, 4> v{z.real(), r, m, M};
    std::sort(v.begin(), v.end());
    return quartic::FourReal{v[0], v[1], v[2], v[3]};
  }
  auto zz = z.imag() < 0 ? std::conj(z) : z;
  return quartic::TwoRealPair{std::min(m, M), std::max(m, M), zz};
}

bool params_consistent(const WaveParameters& params, double rel_tol) {
  quartic::Polynomial expanded;
  try {
    expanded = quartic::from_roots(params.root_structure());
  } catch (const domain_error&) {
    return false;
  }
  const double scale = coeff_scale(expanded);
  return std::abs(expanded.c - params.c) <= rel_tol * scale &&
         std::abs(expanded.a - params.a) <= rel_tol * scale &&
         std::abs(expanded.d - params.d) <= rel_tol * scale;
}

}  // namespace mch

namespace mch::classify {

namespace {

struct Labels {
  double z, r, m, M, c;
};

bool lt(double x, double y, double tol) { return x < y - tol; }
bool eq(double x, double y, double tol) { return std::abs(x - y) <= tol; }

// A kink arrives from ascending root labels as z=r < m=M; move it into the
// paper's named slots z=m < M=r before pattern matching.
Labels canonicalize(Labels lb, double tol) {
  if (eq(lb.z, lb.r, tol) && eq(lb.m, lb.M, tol) && lt(lb.r, lb.m, tol)) std::swap(lb.r, lb.m);
  return lb;
}

std::optional<WaveKind> match_four_up(const Labels& in, double tol) {
  const Labels lb = canonicalize(in, tol);
  if (eq(lb.z, lb.m, tol) && eq(lb.M, lb.r, tol) && lt(lb.m, lb.M, tol) && lt(lb.M, lb.c, tol))
    return WaveKind::kink;

  if (!lt(lb.z, lb.r, tol) || !lt(lb.m, lb.M, tol)) return std::nullopt;
  const bool r_eq_m = eq(lb.r, lb.m, tol);
  const bool r_lt_m = lt(lb.r, lb.m, tol);
  if (!r_eq_m && !r_lt_m) return std::nullopt;

  if (lt(lb.M, lb.c, tol)) return r_lt_m ? WaveKind::smooth_periodic : WaveKind::smooth_decay;
  if (eq(lb.M, lb.c, tol)) return r_lt_m ? WaveKind::periodic_peakon : WaveKind::peakon_decay;
  if (lt(lb.m, lb.c, tol) && lt(lb.c, lb.M, tol))
    return r_lt_m ? WaveKind::periodic_cuspon : WaveKind::cuspon_decay;
  return std::nullopt;
}

std::optional<WaveKind> match_two_up(double m, double M, double c, double tol) {
  if (!lt(m, M, tol)) return std::nullopt;
  if (lt(M, c, tol)) return WaveKind::smooth_periodic;
  if (eq(M, c, tol)) return WaveKind::periodic_peakon;
  if (lt(m, c, tol) && lt(c, M, tol)) return WaveKind::periodic_cuspon;
  return std::nullopt;
}

}  // namespace

WaveCategory classify(const WaveParameters& params) {
  const double tol = ordering_tol(params.c);

  if (params.family == RootFamily::two_real) {
    if (eq(params.m, params.M, tol)) {
      // double real root plus a conjugate pair: Theorem-3 structure
      if (eq(params.c, params.m, tol))
        throw ambiguous_boundary("classify: c coincides with the double root");
      return {WaveKind::unbounded, Orientation::crest_up};
    }
    if (auto k = match_two_up(params.m, params.M, params.c, tol))
      return {*k, Orientation::crest_up};
    if (auto k = match_two_up(-params.m, -params.M, -params.c, tol))
      return {*k, Orientation::crest_down};
    throw ambiguous_boundary("classify: ordering of {m, M, c} is on a case boundary");
  }

  const Labels lb{params.z.real(), params.r, params.m, params.M, params.c};
  if (auto k = match_four_up(lb, tol)) return {*k, Orientation::crest_up};
  if (auto k = match_four_up({-lb.z, -lb.r, -lb.m, -lb.M, -lb.c}, tol))
    return {*k, Orientation::crest_down};
  throw ambiguous_boundary("classify: ordering of {z, r, m, M, c} is outside the case lists");
}

std::string_view kind_name(WaveKind kind) {
  switch (kind) {
    case WaveKind::smooth_periodic: return "smooth-periodic";
    case WaveKind::smooth_decay: return "smooth-decay";
    case WaveKind::kink: return "kink";
    case WaveKind::periodic_peakon: return "periodic-peakon";
    case WaveKind::peakon_decay: return "peakon-decay";
    case WaveKind::periodic_cuspon: return "periodic-cuspon";
    case WaveKind::cuspon_decay: return "cuspon-decay";
    case WaveKind::composite: return "composite";
    case WaveKind::stumpon: return "stumpon";
    case WaveKind::unbounded: return "unbounded";
  }
  return "unknown";
}

std::optional<WaveKind> kind_from_name(std::string_view name) {
  for (int k = 0; k <= static_cast<int>(WaveKind::unbounded); ++k) {
    if (kind_name(static_cast<WaveKind>(k)) == name) return static_cast<WaveKind>(k);
  }
  return std::nullopt;
}

std::vector<StumponPoint> stumpon_points(double c, quartic::QuadricFamily family) {
  std::vector<StumponPoint> out;
  const double a = 2.0 * c * c * c - 2.0 * c * c;
  if (family == quartic::QuadricFamily::hyperboloid) {
    // admissible range: 4c^2 - 2c > 0 together with the c < 0 branch of the
    // reduced hyperboloid
    if (!(c < 0.0)) return out;
    const double s = std::sqrt(4.0 * c * c - 2.0 * c);
    out.push_back({c, c, s, a});
    out.push_back({c, c, -s, a});
  } else {
    if (!(c > 0.0 && c < 1.0)) return out;
    const double s = std::sqrt(-2.0 * c * c + 2.0 * c);
    out.push_back({c, c, -c + s, a});
    out.push_back({c, c, -c - s, a});
  }
  return out;
}

bool gluing_compatible(const std::vector<WaveParameters>& points) {
  if (points.empty()) return true;
  for (const auto& p : points) {
    const WaveKind k = classify(p).kind;
    if (k != WaveKind::periodic_peakon && k != WaveKind::peakon_decay &&
        k != WaveKind::periodic_cuspon && k != WaveKind::cuspon_decay)
      throw domain_error("gluing_compatible: segments must be peakons or cuspons");
  }
  const auto& base = points.front();
  const double tol_c = 1e-9 * (1.0 + std::abs(base.c));
  auto residual = [&](const WaveParameters& p) {
    if (p.family == RootFamily::four_real)
      return quartic::constraint_residual(quartic::QuadricFamily::ellipsoid, p.m, p.M, p.r, base.c);
    return quartic::constraint_residual(quartic::QuadricFamily::hyperboloid, p.m, p.M,
                                        p.z.imag(), base.c);
  };
  const double res0 = residual(base);
  for (const auto& p : points) {
    if (p.family != base.family) return false;
    if (std::abs(p.c - base.c) > tol_c) return false;
    if (std::abs(p.a - base.a) > 1e-9 * (1.0 + std::abs(base.a))) return false;
    if (std::abs(residual(p) - res0) > 1e-9 * (1.0 + std::abs(res0))) return false;
  }
  return true;
}

WaveParameters ellipsoid_cuspon_with_a(double c, double a, double m) {
  if (!(c > 0.0 && c < 1.0)) throw domain_error("ellipsoid_cuspon_with_a: need 0 < c < 1");
  if (!(m < c)) throw domain_error("ellipsoid_cuspon_with_a: trough must lie below c");

  const double a_deg = 2.0 * c * c * c - 2.0 * c * c;
  double M = c;
  double r = -c + std::sqrt(-2.0 * c * c + 2.0 * c);

  const int steps = 64;
  for (int s = 1; s <= steps; ++s) {
    const double t = double(s) / steps;
    const double mt = c + t * (m - c);
    const double at = a_deg + t * (a - a_deg);
    // Newton on (ellipsoid residual, integration-constant residual) in (M, r)
    for (int it = 0; it < 40; ++it) {
      const double g1 = r * r + mt * mt + M * M + r * mt + r * M + mt * M - 2.0 * c;
      const double g2 = (M + mt) * r * r + (mt + r) * M * M + (M + r) * mt * mt +
                        2.0 * mt * r * M + 2.0 * at;
      const double j11 = 2.0 * M + r + mt;
      const double j12 = 2.0 * r + mt + M;
      const double j21 = r * r + 2.0 * (mt + r) * M + mt * mt + 2.0 * mt * r;
      const double j22 = 2.0 * (M + mt) * r + M * M + mt * mt + 2.0 * mt * M;
      const double det = j11 * j22 - j12 * j21;
      if (std::abs(det) < 1e-14) throw error("ellipsoid_cuspon_with_a: singular Newton step");
      const double dM = (g1 * j22 - g2 * j12) / det;
      const double dr = (g2 * j11 - g1 * j21) / det;
      M -= dM;
      r -= dr;
      if (std::abs(dM) + std::abs(dr) < 1e-14) break;
    }
  }

  const double z = -(m + M + r);
  const double tol = ordering_tol(c);
  if (!(z < r - tol && r < m - tol && m < c - tol && c < M - tol))
    throw domain_error("ellipsoid_cuspon_with_a: no periodic cuspon at these (c, a, m)");
  auto params = WaveParameters::four_roots(z, r, m, M);
  if (std::abs(params.c - c) > 1e-8 * (1.0 + std::abs(c)) ||
      std::abs(params.a - a) > 1e-8 * (1.0 + std::abs(a)))
    throw error("ellipsoid_cuspon_with_a: continuation failed to converge");
  return params;
}

WaveParameters make_periodic_peakon(double c, double m) {
  // M = c; the remaining pair solves r^2 + r(m+c) + (m^2 + c^2 + mc - 2c) = 0.
  const double disc = (m + c) * (m + c) - 4.0 * (m * m + c * c + m * c - 2.0 * c);
  if (disc <= 0.0) throw domain_error("make_periodic_peakon: no real pair at these (c, m)");
  const double r_hi = 0.5 * (-(m + c) + std::sqrt(disc));
  const double z_lo = -(m + c + r_hi);
  const double r = std::max(r_hi, z_lo);
  const double z = std::min(r_hi, z_lo);
  const double tol = ordering_tol(c);
  if (!(z < r - tol && r < m - tol && m < c - tol))
    throw domain_error("make_periodic_peakon: ordering z < r < m < M = c fails");
  return WaveParameters::four_roots(z, r, m, c);
}

WaveParameters make_decay_peakon(double c) {
  // m = (-c + sqrt(6c - 2c^2))/3 stays below c only for c > 1/3
  if (!(c > 1.0 / 3.0 && c < 3.0)) throw domain_error("make_decay_peakon: need 1/3 < c < 3");
  const double m = (-c + std::sqrt(6.0 * c - 2.0 * c * c)) / 3.0;
  const double z = -(2.0 * m + c);
  const double tol = ordering_tol(c);
  if (!(z < m - tol && m < c - tol))
    throw domain_error("make_decay_peakon: ordering z < r = m < M = c fails");
  return WaveParameters::four_roots(z, m, m, c);
}

WaveParameters peakon_with_a(double c, double a) {
  // scan the peakon family for a bracket of a(m), then bisect
  const int scan = 800;
  double prev_m = 0.0, prev_a = 0.0;
  bool have_prev = false;
  for (int i = 1; i <= scan; ++i) {
    const double m = c - 2.5 * double(i) / scan;
    WaveParameters p;
    try {
      p = make_periodic_peakon(c, m);
    } catch (const domain_error&) {
      have_prev = false;
      continue;
    }
    if (have_prev && (prev_a - a) * (p.a - a) <= 0.0) {
      double lo = prev_m, hi = m;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double am = make_periodic_peakon(c, mid).a;
        if ((prev_a - a) * (am - a) <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      return make_periodic_peakon(c, 0.5 * (lo + hi));
    }
    prev_m = m;
    prev_a = p.a;
    have_prev = true;
  }
  throw domain_error("peakon_with_a: no periodic peakon with this integration constant");
}

}  // namespace mch::classify
