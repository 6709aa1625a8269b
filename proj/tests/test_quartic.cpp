#include "mch/quartic.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"

using namespace mch;
using namespace mch::quartic;

namespace {

// Direct product oracle: -1/2 * prod(phi - root).
double product_eval(const std::array<std::complex<double>, 4>& roots, double phi) {
  std::complex<double> acc = -0.5;
  for (const auto& rt : roots) acc *= (phi - rt);
  return acc.real();
}

}  // namespace

TEST_CASE("polynomial evaluation matches the Horner expansion") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Polynomial p{coef(rng), coef(rng), coef(rng)};
    for (double phi = -3.0; phi <= 3.0; phi += 0.37) {
      const double direct = phi * phi * (p.c - 0.5 * phi * phi) + p.a * phi + p.d;
      CHECK(std::abs(p(phi) - direct) <= 1e-13 * (1.0 + std::abs(direct)));
    }
  }
}

TEST_CASE("find_roots classifies the explicit factorization c=1, a=d=0") {
  // P = phi^2(1 - phi^2/2): roots {-sqrt(2), 0, 0, sqrt(2)}
  const auto rs = find_roots(Polynomial{1.0, 0.0, 0.0});
  const auto* fr = std::get_if<FourReal>(&rs);
  REQUIRE(fr != nullptr);
  CHECK(fr->z == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
  CHECK(fr->r == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(fr->m == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(fr->M == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("find_roots recovers a constructed DoubleRealPair") {
  // P = -1/2 (phi - m)^2 (phi - z)(phi - zbar) expanded and fed back
  const double m = 0.7;
  const std::complex<double> z{-m, 1.3};  // roots sum to zero
  const auto poly = from_roots(DoubleRealPair{m, z});
  const auto rs = find_roots(poly);
  const auto* dr = std::get_if<DoubleRealPair>(&rs);
  REQUIRE(dr != nullptr);
  CHECK(dr->m == doctest::Approx(m).epsilon(1e-9));
  CHECK(dr->z.real() == doctest::Approx(z.real()).epsilon(1e-9));
  CHECK(dr->z.imag() == doctest::Approx(z.imag()).epsilon(1e-9));
}

TEST_CASE("round-trip through the two-real factorization") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> um(-1.5, 0.5);
  std::uniform_real_distribution<double> uw(0.2, 2.0);
  std::uniform_real_distribution<double> ui(0.3, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double m = um(rng);
    const double M = m + uw(rng);
    const std::complex<double> z{-0.5 * (m + M), ui(rng)};
    const auto poly = from_roots(TwoRealPair{m, M, z});
    const auto rs = find_roots(poly);
    const auto* tr = std::get_if<TwoRealPair>(&rs);
    REQUIRE(tr != nullptr);
    CHECK(std::abs(tr->m - m) <= 1e-8 * (1.0 + std::abs(m)));
    CHECK(std::abs(tr->M - M) <= 1e-8 * (1.0 + std::abs(M)));
    CHECK(std::abs(tr->z - z) <= 1e-8 * (1.0 + std::abs(z)));
    // Re(z) = -(M+m)/2 is forced by the vanishing cubic term
    CHECK(std::abs(tr->z.real() + 0.5 * (tr->m + tr->M)) < 1e-10);
  }
}

TEST_CASE("four-real round-trip reproduces coefficients to 1e-9 relative") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    double z = u(rng), r = u(rng), m = u(rng);
    double M = -(z + r + m);  // roots of P always sum to zero
    std::array<double, 4> v{z, r, m, M};
    std::sort(v.begin(), v.end());
    // keep roots separated so the trial is a clean four-real case
    if (v[1] - v[0] < 0.05 || v[2] - v[1] < 0.05 || v[3] - v[2] < 0.05) continue;
    const FourReal in{v[0], v[1], v[2], v[3]};
    const auto poly = from_roots(in);
    const auto back = from_roots(find_roots(poly));
    const double scale = std::max({1.0, std::abs(poly.c), std::abs(poly.a), std::abs(poly.d)});
    CHECK(std::abs(back.c - poly.c) <= 1e-9 * scale);
    CHECK(std::abs(back.a - poly.a) <= 1e-9 * scale);
    CHECK(std::abs(back.d - poly.d) <= 1e-9 * scale);
  }
}

TEST_CASE("P vanishes at every reported real root") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Polynomial poly{u(rng), u(rng), u(rng)};
    RootStructure rs;
    try {
      rs = find_roots(poly);
    } catch (const domain_error&) {
      continue;  // no real zeros for this draw
    }
    const double maxcoef = std::max({0.5, std::abs(poly.c), std::abs(poly.a), std::abs(poly.d)});
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, FourReal>) {
            for (double x : {s.z, s.r, s.m, s.M}) CHECK(std::abs(poly(x)) <= 1e-8 * maxcoef);
          } else if constexpr (std::is_same_v<T, TwoRealPair>) {
            for (double x : {s.m, s.M}) CHECK(std::abs(poly(x)) <= 1e-8 * maxcoef);
          } else {
            CHECK(std::abs(poly(s.m)) <= 1e-8 * maxcoef);
          }
        },
        rs);
  }
}

TEST_CASE("root classification is stable under coefficient scaling of the snap test") {
  // Scaling all roots scales coefficients but must not change the structure.
  const FourReal base{-1.2, -0.4, 0.5, 1.1};
  for (double s : {1e-3, 1.0, 1e3}) {
    const FourReal scaled{base.z * s, base.r * s, base.m * s, base.M * s};
    const auto rs = find_roots(from_roots(scaled));
    CHECK(std::holds_alternative<FourReal>(rs));
  }
  const TwoRealPair tbase{-0.3, 0.9, {-0.3, 0.8}};
  for (double s : {1e-3, 1.0, 1e3}) {
    const TwoRealPair scaled{tbase.m * s, tbase.M * s, tbase.z * s};
    const auto rs = find_roots(from_roots(scaled));
    CHECK(std::holds_alternative<TwoRealPair>(rs));
  }
}

TEST_CASE("P > 0 strictly on (m, M) for ordered four-real roots") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    double z = u(rng), r = u(rng), m = u(rng);
    std::array<double, 3> v{z, r, m};
    std::sort(v.begin(), v.end());
    const double M = -(v[0] + v[1] + v[2]);
    if (M <= v[2] + 0.05) continue;
    const auto poly = from_roots(FourReal{v[0], v[1], v[2], M});
    for (int i = 1; i < 40; ++i) {
      const double phi = v[2] + (M - v[2]) * i / 40.0;
      CHECK(poly(phi) > 0.0);
    }
  }
}

TEST_CASE("constraint_residual at the named stumpon points") {
  // ellipsoid family, Theorem point (m, M, r) = (c, c, -c + sqrt(-2c^2+2c))
  {
    const double c = 0.5;
    const double r = -c + std::sqrt(-2.0 * c * c + 2.0 * c);
    CHECK(std::abs(constraint_residual(QuadricFamily::ellipsoid, c, c, r, c)) < 1e-12);
  }
  // hyperboloid family, (m, M, Im z) = (c, c, sqrt(4c^2-2c)) at c = -1
  {
    const double c = -1.0;
    const double imz = std::sqrt(4.0 * c * c - 2.0 * c);
    CHECK(std::abs(constraint_residual(QuadricFamily::hyperboloid, c, c, imz, c)) < 1e-12);
  }
  // off-surface point is rejected by a nonzero residual
  {
    const double c = 0.5;
    CHECK(std::abs(constraint_residual(QuadricFamily::ellipsoid, 2.0 * std::sqrt(c), 0.0, 0.0,
                                       c)) > 0.1);
  }
}

TEST_CASE("ellipsoid residual is symmetric under permutations of {m, M, r}") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = u(rng), y = u(rng), w = u(rng), c = u(rng);
    const double base = constraint_residual(QuadricFamily::ellipsoid, x, y, w, c);
    CHECK(constraint_residual(QuadricFamily::ellipsoid, y, x, w, c) ==
          doctest::Approx(base).epsilon(1e-14));
    CHECK(constraint_residual(QuadricFamily::ellipsoid, w, y, x, c) ==
          doctest::Approx(base).epsilon(1e-14));
    CHECK(constraint_residual(QuadricFamily::ellipsoid, x, w, y, c) ==
          doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("reduced-form axes from congruence diagonalization") {
  // ellipsoid: semi-axes {2 sqrt(c), 2 sqrt(c), sqrt(c)} for c > 0
  for (double c : {0.25, 0.5, 0.9}) {
    const auto ax = reduced_form_axes(QuadricFamily::ellipsoid, c);
    CHECK(ax.positive == 3);
    CHECK(ax.axes[0] == doctest::Approx(2.0 * std::sqrt(c)).epsilon(1e-12));
    CHECK(ax.axes[1] == doctest::Approx(2.0 * std::sqrt(c)).epsilon(1e-12));
    CHECK(ax.axes[2] == doctest::Approx(std::sqrt(c)).epsilon(1e-12));
  }
  // two-sheet hyperboloid: one positive direction, semi-axes
  // {sqrt(-2c), 2 sqrt(-c), sqrt(-c)} for c < 0
  for (double c : {-0.5, -1.0, -2.0}) {
    const auto ax = reduced_form_axes(QuadricFamily::hyperboloid, c);
    CHECK(ax.positive == 1);
    CHECK(ax.axes[0] == doctest::Approx(2.0 * std::sqrt(-c)).epsilon(1e-12));
    CHECK(ax.axes[1] == doctest::Approx(std::sqrt(-2.0 * c)).epsilon(1e-12));
    CHECK(ax.axes[2] == doctest::Approx(std::sqrt(-c)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(reduced_form_axes(QuadricFamily::ellipsoid, -1.0), domain_error);
  CHECK_THROWS_AS(reduced_form_axes(QuadricFamily::hyperboloid, 1.0), domain_error);
}

TEST_CASE("integration_constant_a") {
  // Theorem point at c = 0.5: a = 2c^3 - 2c^2 = -0.25
  {
    const double c = 0.5;
    const double r = -c + std::sqrt(-2.0 * c * c + 2.0 * c);
    CHECK(integration_constant_a(QuadricFamily::ellipsoid, c, c, r) ==
          doctest::Approx(-0.25).epsilon(1e-13));
  }
  // odd symmetry: m = -M with r = 0 gives a = 0
  CHECK(integration_constant_a(QuadricFamily::ellipsoid, -0.8, 0.8, 0.0) ==
        doctest::Approx(0.0).epsilon(1e-14));
  // hyperboloid stumpon points carry a = 2c^3 - 2c^2
  for (double c : {-0.5, -1.0, -1.7}) {
    const double imz = std::sqrt(4.0 * c * c - 2.0 * c);
    CHECK(integration_constant_a(QuadricFamily::hyperboloid, c, c, imz) ==
          doctest::Approx(2.0 * c * c * c - 2.0 * c * c).epsilon(1e-12));
  }
  // random valid ellipsoid point: a closes the root reconstruction loop
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    double z = u(rng), r = u(rng), m = u(rng);
    std::array<double, 3> v{z, r, m};
    std::sort(v.begin(), v.end());
    const double M = -(v[0] + v[1] + v[2]);
    if (M <= v[2] + 0.05 || v[1] - v[0] < 0.05 || v[2] - v[1] < 0.05) continue;
    const auto poly = from_roots(FourReal{v[0], v[1], v[2], M});
    // every genuine root set lies on its own c-ellipsoid; aux slots are the
    // wave labels (m, M, r) = (v[2], M, v[1])
    CHECK(std::abs(constraint_residual(QuadricFamily::ellipsoid, v[2], M, v[1], poly.c)) < 1e-10);
    const double a = integration_constant_a(QuadricFamily::ellipsoid, v[2], M, v[1]);
    CHECK(a == doctest::Approx(poly.a).epsilon(1e-10));
    const auto rs = find_roots(Polynomial{poly.c, a, poly.d});
    const auto* fr = std::get_if<FourReal>(&rs);
    REQUIRE(fr != nullptr);
    CHECK(fr->M == doctest::Approx(M).epsilon(1e-8));
  }
}

TEST_CASE("recover_d against the direct product oracle") {
  CHECK(recover_d(FourReal{-std::sqrt(2.0), 0.0, 0.0, std::sqrt(2.0)}) ==
        doctest::Approx(0.0).epsilon(1e-14));

  const TwoRealPair tr{-0.4, 1.0, {-0.3, 0.9}};
  CHECK(recover_d(tr) ==
        doctest::Approx(-0.5 * tr.m * tr.M * std::norm(tr.z)).epsilon(1e-13));

  const DoubleRealPair dr{0.6, {-0.6, 1.1}};
  const std::array<std::complex<double>, 4> roots{
      std::complex<double>(dr.m), dr.m, dr.z, std::conj(dr.z)};
  // d is P(0) of the expanded product
  CHECK(recover_d(dr) == doctest::Approx(product_eval(roots, 0.0)).epsilon(1e-13));

  // cross-check full expansions at sample points
  const auto poly = from_roots(tr);
  const std::array<std::complex<double>, 4> troots{
      std::complex<double>(tr.m), tr.M, tr.z, std::conj(tr.z)};
  for (double phi = -2.0; phi <= 2.0; phi += 0.23)
    CHECK(poly(phi) == doctest::Approx(product_eval(troots, phi)).epsilon(1e-12));
}

TEST_CASE("degenerate and invalid inputs") {
  CHECK_THROWS_AS(find_roots(Polynomial{0.0, 0.0, -1.0}), domain_error);  // no real zeros
  CHECK_THROWS_AS(find_roots(Polynomial{std::nan(""), 0.0, 0.0}), domain_error);
  CHECK_THROWS_AS(from_roots(FourReal{0.0, 0.0, 0.0, 1.0}), domain_error);  // sum != 0
}
