#include "mch/serialize.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mch/classify.hpp"

using namespace mch;

TEST_CASE("profile JSON round-trip is lossless") {
  const auto p = classify::make_periodic_peakon(0.5, 0.45);
  const auto prof = profile::build_quadrature(p, 1024);

  const auto doc = serialize::profile_to_json(prof);
  CHECK(doc.at("schema").get<std::string>() == "mch/1");
  const auto back = serialize::profile_from_json(doc);

  REQUIRE(back.xi.size() == prof.xi.size());
  for (std::size_t i = 0; i < prof.xi.size(); i += 31) {
    CHECK(std::abs(back.xi[i] - prof.xi[i]) < 1e-12);
    CHECK(std::abs(back.phi[i] - prof.phi[i]) < 1e-12);
  }
  CHECK(back.category == prof.category);
  CHECK(back.params.c == prof.params.c);
  CHECK(back.params.a == prof.params.a);
  REQUIRE(back.period.has_value());
  CHECK(*back.period == *prof.period);
}

TEST_CASE("composite profiles keep their segment bookkeeping through JSON") {
  const double c = 0.5;
  const double a = 2.0 * c * c * c - 2.0 * c * c;
  const auto cus1 = classify::ellipsoid_cuspon_with_a(c, a, 0.35);
  const auto cus2 = classify::ellipsoid_cuspon_with_a(c, a, 0.42);
  const auto stump = profile::assemble_composite({cus1, cus2}, {1.0});

  const auto back = serialize::profile_from_json(serialize::profile_to_json(stump));
  CHECK(back.segments.size() == 2);
  CHECK(back.plateaus == stump.plateaus);
  CHECK(back.segment_of == stump.segment_of);
  CHECK(back.category.kind == classify::WaveKind::stumpon);
}

TEST_CASE("snapshot round-trip") {
  std::vector<double> u(128);
  for (int i = 0; i < 128; ++i) u[static_cast<std::size_t>(i)] = std::sin(0.21 * i) * 0.3;
  const pde::SimulationState state(40.0, u, 1.375);

  std::stringstream ss;
  serialize::write_snapshot(ss, state);
  const auto back = serialize::read_snapshot(ss);
  CHECK(back.length == state.length);
  CHECK(back.t == state.t);
  REQUIRE(back.n() == state.n());
  for (int i = 0; i < state.n(); ++i)
    CHECK(back.u[static_cast<std::size_t>(i)] == state.u[static_cast<std::size_t>(i)]);
}

TEST_CASE("malformed documents are rejected") {
  nlohmann::json j;
  j["schema"] = "mch/1";
  j["kind"] = "something-else";
  CHECK_THROWS_AS(serialize::profile_from_json(j), domain_error);
  std::stringstream ss("not a snapshot");
  CHECK_THROWS_AS(serialize::read_snapshot(ss), domain_error);
}
