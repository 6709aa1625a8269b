#include "mch/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mch/elliptic.hpp"
#include "mch/parallel.hpp"

namespace mch::profile {

namespace {

using classify::Orientation;
using classify::WaveKind;

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr double gl_x[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                            0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                            0.9445750230732326, 0.9894009349916499};
constexpr double gl_w[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                            0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                            0.0622535239386479, 0.0271524594117541};

template <class F>
double gl16(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double hal = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 8; ++i)
    acc += gl_w[i] * (f(mid + hal * gl_x[i]) + f(mid - hal * gl_x[i]));
  return acc * hal;
}

template <class F>
double gl8(const F& f, double a, double b) {
  static const double xs[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                               0.9602898564975363};
  static const double ws[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                               0.1012285362903763};
  const double mid = 0.5 * (a + b);
  const double hal = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) acc += ws[i] * (f(mid + hal * xs[i]) + f(mid - hal * xs[i]));
  return acc * hal;
}

template <class F>
double adaptive(const F& f, double a, double b, double tol, int depth = 0) {
  const double whole = gl16(f, a, b);
  const double fine = gl8(f, a, 0.5 * (a + b)) + gl8(f, 0.5 * (a + b), b);
  if (depth > 40) return whole;
  if (std::abs(whole - fine) <= tol) return whole;
  return adaptive(f, a, 0.5 * (a + b), 0.5 * tol, depth + 1) +
         adaptive(f, 0.5 * (a + b), b, 0.5 * tol, depth + 1);
}

bool peakon_cancelled(const WaveParameters& p) {
  return std::abs(p.M - p.c) <= classify::ordering_tol(p.c);
}

// extra-root product: (y - z)(y - r) for the four-real family, the conjugate
// pair modulus for the two-real family
double extra(const WaveParameters& p, double y) {
  if (p.family == RootFamily::four_real) return (y - p.z.real()) * (y - p.r);
  const double dre = y - p.z.real();
  return dre * dre + p.z.imag() * p.z.imag();
}

double F_full(const WaveParameters& p, double y, bool cancel) {
  if (cancel) return 0.5 * (y - p.m) * extra(p, y);
  return 0.5 * (p.M - y) * (y - p.m) * extra(p, y) / (p.c - y);
}

// F/(M - y): smooth-crest zone (M < c there, no cancellation)
double G_top(const WaveParameters& p, double y) {
  return 0.5 * (y - p.m) * extra(p, y) / (p.c - y);
}

// P(y): cuspon crest zone
double P_only(const WaveParameters& p, double y) {
  return 0.5 * (p.M - y) * (y - p.m) * extra(p, y);
}

// F/(y - m): simple trough
double G_bot(const WaveParameters& p, double y, bool cancel) {
  if (cancel) return 0.5 * extra(p, y);
  return 0.5 * (p.M - y) * extra(p, y) / (p.c - y);
}

// F/(y - m)^2: double trough (four-real family with r = m)
double G_bot2(const WaveParameters& p, double y, bool cancel) {
  if (cancel) return 0.5 * (y - p.z.real());
  return 0.5 * (p.M - y) * (y - p.z.real()) / (p.c - y);
}

enum class CrestKind { turning, peakon, pole };

struct BranchSpec {
  WaveParameters p;
  classify::WaveCategory cat;
  CrestKind crest = CrestKind::turning;
  bool decay = false;
  bool cancel = false;
  double top = 0.0, bottom = 0.0, amplitude = 0.0;
  double crest_zone = 0.0, trough_zone = 0.0;  // phi boundaries of the end zones
  double cutoff_depth = 0.0;                   // decay: lowest sampled phi - m
};

BranchSpec make_branch(const WaveParameters& p) {
  if (!params_consistent(p))
    throw domain_error("profile: parameters are not a consistent root set");
  BranchSpec b;
  b.p = p;
  b.cat = classify::classify(p);
  if (b.cat.orientation != Orientation::crest_up)
    throw domain_error("profile: crest-down profiles are not constructed; mirror the wave");
  switch (b.cat.kind) {
    case WaveKind::smooth_periodic: b.crest = CrestKind::turning; break;
    case WaveKind::smooth_decay: b.crest = CrestKind::turning; b.decay = true; break;
    case WaveKind::periodic_peakon: b.crest = CrestKind::peakon; break;
    case WaveKind::peakon_decay: b.crest = CrestKind::peakon; b.decay = true; break;
    case WaveKind::periodic_cuspon: b.crest = CrestKind::pole; break;
    case WaveKind::cuspon_decay: b.crest = CrestKind::pole; b.decay = true; break;
    default:
      throw domain_error("profile: category has no single quadrature branch");
  }
  b.cancel = peakon_cancelled(p);
  b.top = std::min(p.M, p.c);
  b.bottom = p.m;
  b.amplitude = b.top - b.bottom;
  if (!(b.amplitude > 0.0)) throw domain_error("profile: empty amplitude range");
  b.crest_zone = b.top - 0.15 * b.amplitude;
  b.trough_zone = b.bottom + 0.15 * b.amplitude;
  b.cutoff_depth = 1e-10 * (p.c - p.m);
  return b;
}

// xi length of one inter-sample interval [ylo, yhi], using the substitution
// suited to the zone the interval lies in.
double interval_dxi(const BranchSpec& b, double ylo, double yhi) {
  const double ym = 0.5 * (ylo + yhi);
  if (ym >= b.crest_zone && b.crest != CrestKind::peakon) {
    const double slo = std::sqrt(std::max(0.0, b.top - yhi));
    const double shi = std::sqrt(b.top - ylo);
    if (b.crest == CrestKind::pole)
      return gl16([&](double s) { return 2.0 * s * s / std::sqrt(P_only(b.p, b.top - s * s)); },
                  slo, shi);
    return gl16([&](double s) { return 2.0 / std::sqrt(G_top(b.p, b.top - s * s)); }, slo, shi);
  }
  if (ym <= b.trough_zone) {
    if (b.decay) {
      const double tlo = std::log(ylo - b.bottom);
      const double thi = std::log(yhi - b.bottom);
      return gl16(
          [&](double t) { return 1.0 / std::sqrt(G_bot2(b.p, b.bottom + std::exp(t), b.cancel)); },
          tlo, thi);
    }
    const double slo = std::sqrt(std::max(0.0, ylo - b.bottom));
    const double shi = std::sqrt(yhi - b.bottom);
    return gl16([&](double s) { return 2.0 / std::sqrt(G_bot(b.p, b.bottom + s * s, b.cancel)); },
                slo, shi);
  }
  return gl16([&](double y) { return 1.0 / std::sqrt(F_full(b.p, y, b.cancel)); }, ylo, yhi);
}

// Descending phi sample grid: geometric refinement stacks at the crest and
// trough (ratio 0.5, 20 levels) around a sin^2-graded interior.
std::vector<double> build_phi_grid(const BranchSpec& b, int n_samples) {
  const int n = std::max(n_samples, 256);
  const double A = b.amplitude;
  // deep enough that the unresolved sliver under a 2/3-power cusp carries
  // negligible energy; levels past double resolution dedupe away
  constexpr int levels = 44;

  std::vector<double> phis;
  phis.reserve(static_cast<std::size_t>(n) + 4 * levels + 8);
  phis.push_back(b.top);

  // crest stack
  {
    const int sc = std::max(6, static_cast<int>(0.35 * n) / levels);
    const double g0 = 0.15 * A;
    const bool sqrt_space = b.crest != CrestKind::peakon;
    for (int l = 0; l < levels; ++l) {
      const double dhi = g0 * std::pow(0.5, l);
      const double dlo = g0 * std::pow(0.5, l + 1);
      for (int j = sc - 1; j >= 1; --j) {
        const double f = double(j) / sc;
        const double depth = sqrt_space
                                 ? std::pow(std::sqrt(dlo) + f * (std::sqrt(dhi) - std::sqrt(dlo)), 2)
                                 : dlo + f * (dhi - dlo);
        phis.push_back(b.top - depth);
      }
      phis.push_back(b.top - dlo);
    }
  }
  phis.push_back(b.crest_zone);

  // interior, graded like sin^2 to blend into both end zones
  {
    const int nb = std::max(64, static_cast<int>(0.3 * n));
    const double th_lo = std::asin(std::sqrt(0.15));
    const double th_hi = std::asin(std::sqrt(0.85));
    for (int j = nb - 1; j >= 1; --j) {
      const double th = th_lo + (th_hi - th_lo) * j / nb;
      const double s = std::sin(th);
      phis.push_back(b.bottom + A * s * s);
    }
  }
  phis.push_back(b.trough_zone);

  // trough side
  if (b.decay) {
    const int nt = std::max(150, static_cast<int>(0.35 * n));
    const double t_hi = std::log(0.15 * A);
    const double t_lo = std::log(b.cutoff_depth);
    for (int j = 1; j <= nt; ++j)
      phis.push_back(b.bottom + std::exp(t_hi + (t_lo - t_hi) * j / nt));
  } else {
    const int st = std::max(6, static_cast<int>(0.35 * n) / levels);
    const double g0 = 0.15 * A;
    for (int l = 0; l < levels; ++l) {
      const double dhi = g0 * std::pow(0.5, l);
      const double dlo = g0 * std::pow(0.5, l + 1);
      for (int j = st - 1; j >= 1; --j) {
        const double f = double(j) / st;
        const double depth = std::pow(std::sqrt(dlo) + f * (std::sqrt(dhi) - std::sqrt(dlo)), 2);
        phis.push_back(b.bottom + depth);
      }
      phis.push_back(b.bottom + dlo);
    }
    phis.push_back(b.bottom);
  }

  std::sort(phis.begin(), phis.end(), std::greater<>());
  phis.erase(std::unique(phis.begin(), phis.end(),
                         [&](double x, double y) { return std::abs(x - y) <= 1e-14 * A; }),
             phis.end());
  return phis;
}

struct BranchTable {
  BranchSpec spec;
  std::vector<double> phi;  // descending from the crest value
  std::vector<double> xi;   // ascending from 0
};

BranchTable build_branch(const WaveParameters& params, int n_samples) {
  BranchTable t;
  t.spec = make_branch(params);
  t.phi = build_phi_grid(t.spec, n_samples);
  const std::ptrdiff_t nint = static_cast<std::ptrdiff_t>(t.phi.size()) - 1;
  std::vector<double> lengths(static_cast<std::size_t>(nint));
  par::parallel_for(nint, [&](std::ptrdiff_t i) {
    lengths[static_cast<std::size_t>(i)] =
        interval_dxi(t.spec, t.phi[static_cast<std::size_t>(i) + 1],
                     t.phi[static_cast<std::size_t>(i)]);
  });
  t.xi.resize(t.phi.size());
  t.xi[0] = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) t.xi[i + 1] = t.xi[i] + lengths[i];

  // the innermost refinement levels can produce xi increments below double
  // resolution; keep only strictly increasing samples
  std::vector<double> phi_clean, xi_clean;
  phi_clean.reserve(t.phi.size());
  xi_clean.reserve(t.xi.size());
  phi_clean.push_back(t.phi[0]);
  xi_clean.push_back(t.xi[0]);
  for (std::size_t i = 1; i < t.xi.size(); ++i) {
    if (t.xi[i] > xi_clean.back()) {
      phi_clean.push_back(t.phi[i]);
      xi_clean.push_back(t.xi[i]);
    }
  }
  t.phi = std::move(phi_clean);
  t.xi = std::move(xi_clean);
  return t;
}

// phi at branch coordinate w in [0, xi.back()], by bisection on the
// cumulative quadrature within the bracketing interval.
double branch_invert(const BranchTable& t, double w) {
  if (w <= 0.0) return t.phi.front();
  if (w >= t.xi.back()) return t.phi.back();
  const auto it = std::upper_bound(t.xi.begin(), t.xi.end(), w);
  std::size_t i = static_cast<std::size_t>(it - t.xi.begin()) - 1;
  double hi = t.phi[i];      // phi at xi[i], larger
  double lo = t.phi[i + 1];  // phi at xi[i+1], smaller
  const double base = t.xi[i];
  for (int iter = 0; iter < 52 && hi - lo > 0.0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double ximid = base + interval_dxi(t.spec, mid, t.phi[i]);
    (ximid < w ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double eval_F(double phi, const WaveParameters& params) {
  const bool cancel = peakon_cancelled(params);
  if (!cancel && std::abs(params.c - phi) <= 1e-13 * (1.0 + std::abs(params.c)))
    throw domain_error("eval_F: pole at phi = c");
  return F_full(params, phi, cancel);
}

std::vector<double> branch_interval_lengths(const WaveParameters& params,
                                            std::span<const double> phi_descending,
                                            bool parallel) {
  const BranchSpec spec = make_branch(params);
  const std::ptrdiff_t nint = static_cast<std::ptrdiff_t>(phi_descending.size()) - 1;
  std::vector<double> lengths(static_cast<std::size_t>(std::max<std::ptrdiff_t>(nint, 0)));
  auto body = [&](std::ptrdiff_t i) {
    lengths[static_cast<std::size_t>(i)] =
        interval_dxi(spec, phi_descending[static_cast<std::size_t>(i) + 1],
                     phi_descending[static_cast<std::size_t>(i)]);
  };
  if (parallel)
    par::parallel_for(nint, body);
  else
    par::serial_for(nint, body);
  return lengths;
}

WaveProfile build_quadrature(const WaveParameters& params, int n_samples) {
  const BranchTable t = build_branch(params, n_samples);
  const std::size_t n = t.phi.size();

  WaveProfile out;
  out.category = t.spec.cat;
  out.params = params;
  out.crest_xi = 0.0;
  out.xi.reserve(2 * n - 1);
  out.phi.reserve(2 * n - 1);
  for (std::size_t i = n; i-- > 1;) {
    out.xi.push_back(-t.xi[i]);
    out.phi.push_back(t.phi[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.xi.push_back(t.xi[i]);
    out.phi.push_back(t.phi[i]);
  }
  if (!t.spec.decay) out.period = 2.0 * t.xi.back();
  return out;
}

double period(const WaveParameters& params) {
  const BranchSpec b = make_branch(params);
  if (b.decay) throw domain_error("period: category is not periodic");
  const double tol = 1e-13;
  double half = 0.0;
  // crest zone, transformed
  if (b.crest == CrestKind::pole) {
    const double shi = std::sqrt(b.top - b.crest_zone);
    half += adaptive([&](double s) { return 2.0 * s * s / std::sqrt(P_only(b.p, b.top - s * s)); },
                     0.0, shi, tol);
  } else if (b.crest == CrestKind::turning) {
    const double shi = std::sqrt(b.top - b.crest_zone);
    half += adaptive([&](double s) { return 2.0 / std::sqrt(G_top(b.p, b.top - s * s)); }, 0.0,
                     shi, tol);
  } else {
    half += adaptive([&](double y) { return 1.0 / std::sqrt(F_full(b.p, y, b.cancel)); },
                     b.crest_zone, b.top, tol);
  }
  // interior
  half += adaptive([&](double y) { return 1.0 / std::sqrt(F_full(b.p, y, b.cancel)); },
                   b.trough_zone, b.crest_zone, tol);
  // trough zone, transformed
  {
    const double shi = std::sqrt(b.trough_zone - b.bottom);
    half += adaptive([&](double s) { return 2.0 / std::sqrt(G_bot(b.p, b.bottom + s * s, b.cancel)); },
                     0.0, shi, tol);
  }
  return 2.0 * half;
}

struct ProfileEvaluator::Impl {
  BranchTable table;
  bool periodic;
  double L;  // period when periodic, else 2 * half span
};

ProfileEvaluator::ProfileEvaluator(const WaveParameters& params, int n_samples)
    : impl_(std::make_unique<Impl>()) {
  impl_->table = build_branch(params, n_samples);
  impl_->periodic = !impl_->table.spec.decay;
  impl_->L = 2.0 * impl_->table.xi.back();
}

ProfileEvaluator::~ProfileEvaluator() = default;
ProfileEvaluator::ProfileEvaluator(ProfileEvaluator&&) noexcept = default;
ProfileEvaluator& ProfileEvaluator::operator=(ProfileEvaluator&&) noexcept = default;

double ProfileEvaluator::operator()(double xi) const {
  const double half = impl_->table.xi.back();
  double w = std::abs(xi);
  if (impl_->periodic) {
    w = std::fmod(w, impl_->L);
    if (w > half) w = impl_->L - w;
  } else if (w >= half) {
    return impl_->table.phi.back();
  }
  return branch_invert(impl_->table, w);
}

double ProfileEvaluator::half_span() const { return impl_->table.xi.back(); }
bool ProfileEvaluator::periodic() const { return impl_->periodic; }

PeriodicPeakonForm periodic_peakon_constants(const WaveParameters& params, bool corrected) {
  const auto cat = classify::classify(params);
  if (cat.kind != WaveKind::periodic_peakon || cat.orientation != Orientation::crest_up ||
      params.family != RootFamily::four_real)
    throw domain_error("periodic_peakon_constants: need a crest-up four-real periodic peakon");
  const double span = params.M - params.m;  // equals c - m
  const double B = (params.m - params.r) / span;
  const double C = (params.m - params.z.real()) / span;
  if (!(B > 0.0) || !(C > B))
    throw domain_error("periodic_peakon_constants: need 0 < B < C");
  PeriodicPeakonForm f{};
  f.corrected = corrected;
  f.k = std::sqrt(B / C);
  f.k_prime = elliptic::Modulus(f.k).k_prime;
  f.D1 = std::sqrt(C) * std::sqrt(params.c - params.m) / (2.0 * std::sqrt(2.0));
  f.D2 = (corrected ? B : B * B) * (params.c - params.m);
  f.D3 = 2.0 / f.D1;
  const double barg = corrected ? 1.0 / std::sqrt(1.0 + B) : 1.0 / std::sqrt(1.0 + B * B);
  f.L = f.D3 * elliptic::incomplete_F(std::asin(barg), f.k_prime);
  return f;
}

double periodic_peakon_value(const PeriodicPeakonForm& form, const WaveParameters& params,
                             double xi) {
  double w = std::fmod(std::abs(xi), form.L);
  if (w > 0.5 * form.L) w = form.L - w;
  const auto j = elliptic::jacobi(form.D1 * w, form.k_prime);
  if (j.tn_pole) return params.c;
  const double value = params.m + form.D2 * j.tn * j.tn;
  return std::min(value, params.c);
}

WaveProfile explicit_periodic_peakon(const WaveParameters& params, int n_samples) {
  const auto form = periodic_peakon_constants(params);
  const int n = std::max(n_samples, 64);
  WaveProfile out;
  out.category = {WaveKind::periodic_peakon, Orientation::crest_up};
  out.params = params;
  out.period = form.L;
  out.crest_xi = 0.5 * form.L;  // trough-centered sampling: crests at +-L/2
  out.xi.reserve(static_cast<std::size_t>(n) + 1);
  out.phi.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = -0.5 * form.L + form.L * i / n;
    out.xi.push_back(x);
    out.phi.push_back(periodic_peakon_value(form, params, x));
  }
  return out;
}

DecayPeakonForm decay_peakon_constants(const WaveParameters& params, bool inverted_denominator) {
  const auto cat = classify::classify(params);
  if (cat.kind != WaveKind::peakon_decay || cat.orientation != Orientation::crest_up ||
      params.family != RootFamily::four_real)
    throw domain_error("decay_peakon_constants: need a crest-up four-real decay peakon");
  const double C = (params.m - params.z.real()) / (params.c - params.m);
  if (!(C > 0.0)) throw domain_error("decay_peakon_constants: need C > 0");
  const double root = 1.0 + std::sqrt(1.0 + 1.0 / C);
  DecayPeakonForm f{};
  f.inverted_denominator = inverted_denominator;
  f.D4 = 4.0 * C * C * (params.c - params.m) * root * root;
  f.D5 = std::sqrt(C) * std::sqrt(params.c - params.m) / std::sqrt(2.0);
  f.D6 = C * root * root;
  return f;
}

double decay_peakon_value(const DecayPeakonForm& form, const WaveParameters& params, double xi) {
  const double q = std::exp(-form.D5 * std::abs(xi));
  const double den = form.inverted_denominator ? form.D6 * q - 1.0 : form.D6 - q;
  return params.m + form.D4 * q / (den * den);
}

WaveProfile explicit_decay_peakon(const WaveParameters& params, int n_samples) {
  const auto form = decay_peakon_constants(params);
  const int n = std::max(n_samples, 64);
  // truncate where phi - m falls to 1e-10 of the amplitude
  const double q_cut = 1e-10 * (params.c - params.m) * form.D6 * form.D6 / form.D4;
  const double span = -std::log(q_cut) / form.D5;
  WaveProfile out;
  out.category = {WaveKind::peakon_decay, Orientation::crest_up};
  out.params = params;
  out.crest_xi = 0.0;
  out.xi.reserve(static_cast<std::size_t>(n) + 1);
  out.phi.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = -span + 2.0 * span * i / n;
    out.xi.push_back(x);
    out.phi.push_back(decay_peakon_value(form, params, x));
  }
  return out;
}

double fit_local_exponent(const WaveProfile& profile, FitPoint at) {
  const bool decay_profile = profile.category.kind == WaveKind::smooth_decay ||
                             profile.category.kind == WaveKind::peakon_decay ||
                             profile.category.kind == WaveKind::cuspon_decay;
  const double span = profile.xi.back() - profile.xi.front();
  const double Lref = profile.period.value_or(span);

  std::vector<double> lx, ly;
  if (at == FitPoint::trough && decay_profile) {
    // exponential tail: fit ln(phi - m) against xi over the outer tail
    const double m = profile.params.m;
    for (std::size_t i = 0; i < profile.xi.size(); ++i) {
      const double w = std::abs(profile.xi[i] - profile.crest_xi);
      if (w < 0.4 * 0.5 * span || w > 0.85 * 0.5 * span) continue;
      const double depth = profile.phi[i] - m;
      if (depth <= 0.0) continue;
      lx.push_back(w);
      ly.push_back(std::log(depth));
    }
    if (lx.size() < 8) throw domain_error("fit_local_exponent: insufficient samples in the tail");
  } else {
    double xi0, phi0;
    if (at == FitPoint::crest) {
      xi0 = profile.crest_xi;
      phi0 = *std::max_element(profile.phi.begin(), profile.phi.end());
    } else {
      xi0 = profile.xi.back();  // crest-centered periodic wave: troughs at the ends
      phi0 = *std::min_element(profile.phi.begin(), profile.phi.end());
    }
    for (std::size_t i = 0; i < profile.xi.size(); ++i) {
      const double w = std::abs(profile.xi[i] - xi0);
      if (w < 1e-4 * Lref || w > 1e-2 * Lref) continue;
      const double depth = std::abs(profile.phi[i] - phi0);
      if (depth <= 0.0) continue;
      lx.push_back(std::log(w));
      ly.push_back(std::log(depth));
    }
    if (lx.size() < 8)
      throw domain_error("fit_local_exponent: insufficient samples in the fit window");
  }

  // least-squares slope
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  return (at == FitPoint::trough && decay_profile) ? -slope : slope;
}

WaveProfile assemble_composite(const std::vector<WaveParameters>& segments,
                               const std::vector<double>& plateaus) {
  if (segments.empty()) throw domain_error("assemble_composite: no segments");
  if (plateaus.size() + 1 != segments.size() && !(segments.size() == 1 && plateaus.empty()))
    throw domain_error("assemble_composite: need one plateau slot between consecutive segments");
  if (!classify::gluing_compatible(segments))
    throw domain_error("assemble_composite: segments are not gluing-compatible");

  bool any_plateau = false;
  for (double p : plateaus) {
    if (p < 0.0) throw domain_error("assemble_composite: negative plateau length");
    if (p > 0.0) any_plateau = true;
  }
  const double c = segments.front().c;
  const double a = segments.front().a;
  if (any_plateau) {
    const double a_stump = 2.0 * c * c * c - 2.0 * c * c;
    if (std::abs(a - a_stump) > 1e-9 * (1.0 + std::abs(a_stump)))
      throw domain_error("assemble_composite: plateaus require a = 2c^3 - 2c^2");
  }

  constexpr int seg_samples = 30000;
  WaveProfile out;
  out.params = segments.front();
  out.segments = segments;
  out.plateaus = plateaus;
  out.category = {any_plateau ? WaveKind::stumpon : WaveKind::composite, Orientation::crest_up};
  out.crest_xi = 0.0;

  double offset = 0.0;
  double typical_dx = 0.0;
  std::vector<bool> anchor;  // junction samples that must survive cleanup
  auto push = [&](double x, double value, int seg, bool is_anchor) {
    out.xi.push_back(x);
    out.phi.push_back(value);
    out.segment_of.push_back(seg);
    anchor.push_back(is_anchor);
  };
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const BranchTable t = build_branch(segments[s], seg_samples);
    if (t.spec.decay)
      throw domain_error("assemble_composite: decay segments cannot be glued periodically");
    const std::size_t n = t.phi.size();
    const double L = 2.0 * t.xi.back();
    typical_dx = std::max(typical_dx, L / (2.0 * double(n)));

    // crest-to-crest: crest, descent to trough, mirrored ascent, crest
    const bool skip_first = !out.xi.empty();  // junction sample already present
    for (std::size_t i = skip_first ? 1 : 0; i < n; ++i)
      push(offset + t.xi[i], t.phi[i], static_cast<int>(s), i == 0);
    for (std::size_t i = n - 1; i-- > 0;)
      push(offset + L - t.xi[i], t.phi[i], static_cast<int>(s), i == 0);
    offset += L;

    if (s + 1 < segments.size() && plateaus[s] > 0.0) {
      const int np = std::max(16, static_cast<int>(plateaus[s] / std::max(typical_dx, 1e-6)));
      for (int j = 1; j <= np; ++j)
        push(offset + plateaus[s] * j / np, c, -1, j == np);
      offset += plateaus[s];
    }
  }

  // Near a junction the running offset swallows the finest xi increments of
  // the segment grid. Keep strictly increasing samples; anchors win over the
  // collapsed near-crest samples before them.
  WaveProfile clean = out;
  clean.xi.clear();
  clean.phi.clear();
  clean.segment_of.clear();
  std::vector<bool> kept_anchor;
  for (std::size_t i = 0; i < out.xi.size(); ++i) {
    if (!clean.xi.empty() && !(out.xi[i] > clean.xi.back())) {
      if (!anchor[i]) continue;
      while (!clean.xi.empty() && !kept_anchor.back() && clean.xi.back() >= out.xi[i]) {
        clean.xi.pop_back();
        clean.phi.pop_back();
        clean.segment_of.pop_back();
        kept_anchor.pop_back();
      }
      if (!clean.xi.empty() && clean.xi.back() >= out.xi[i]) continue;  // two anchors collided
    }
    clean.xi.push_back(out.xi[i]);
    clean.phi.push_back(out.phi[i]);
    clean.segment_of.push_back(out.segment_of[i]);
    kept_anchor.push_back(anchor[i]);
  }
  return clean;
}

}  // namespace mch::profile
