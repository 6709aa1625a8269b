#include "mch/parallel.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"

TEST_CASE("parallel_for matches serial_for element-wise") {
  const std::ptrdiff_t n = 100000;
  std::vector<double> a(n), b(n);
  mch::par::parallel_for(n, [&](std::ptrdiff_t i) { a[i] = std::sin(0.001 * double(i)); });
  mch::par::serial_for(n, [&](std::ptrdiff_t i) { b[i] = std::sin(0.001 * double(i)); });
  for (std::ptrdiff_t i = 0; i < n; ++i) REQUIRE(a[i] == b[i]);
}

TEST_CASE("block_sum is bitwise identical to its serial twin") {
  const std::ptrdiff_t n = 1 << 18;
  auto term = [](std::ptrdiff_t i) { return std::cos(1e-4 * double(i)) / (1.0 + double(i % 17)); };
  const double p = mch::par::block_sum(n, term);
  const double s = mch::par::serial_block_sum(n, term);
  CHECK(p == s);
}

TEST_CASE("block_max finds the maximum") {
  const std::ptrdiff_t n = 54321;
  auto term = [](std::ptrdiff_t i) { return -std::abs(double(i) - 1234.0); };
  CHECK(mch::par::block_max(n, term) == 0.0);
  CHECK(mch::par::max_threads() >= 1);
}
