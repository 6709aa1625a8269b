#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mch::par {

/// Worker thread cap. Honors the MCH_NUM_THREADS environment variable,
/// otherwise follows the OpenMP default. Always 1 in builds without OpenMP.
int max_threads();

template <class F>
void parallel_for(std::ptrdiff_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(mch::par::max_threads())
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
#else
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
#endif
}

/// Serial twin of parallel_for, kept for the reference path and benchmarks.
template <class F>
void serial_for(std::ptrdiff_t n, F&& body) {
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

inline constexpr std::ptrdiff_t reduction_block = 4096;

/// Blocked sum: per-block partials are computed in parallel and combined in
/// block order, so the result is independent of the thread count.
template <class F>
double block_sum(std::ptrdiff_t n, F&& term) {
  const std::ptrdiff_t nblocks = (n + reduction_block - 1) / reduction_block;
  std::vector<double> partial(static_cast<std::size_t>(std::max<std::ptrdiff_t>(nblocks, 1)), 0.0);
  parallel_for(nblocks, [&](std::ptrdiff_t b) {
    const std::ptrdiff_t lo = b * reduction_block;
    const std::ptrdiff_t hi = std::min(n, lo + reduction_block);
    double s = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

template <class F>
double serial_block_sum(std::ptrdiff_t n, F&& term) {
  const std::ptrdiff_t nblocks = (n + reduction_block - 1) / reduction_block;
  double total = 0.0;
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const std::ptrdiff_t lo = b * reduction_block;
    const std::ptrdiff_t hi = std::min(n, lo + reduction_block);
    double s = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) s += term(i);
    total += s;
  }
  return total;
}

template <class F>
double block_max(std::ptrdiff_t n, F&& term) {
  const std::ptrdiff_t nblocks = (n + reduction_block - 1) / reduction_block;
  std::vector<double> partial(static_cast<std::size_t>(std::max<std::ptrdiff_t>(nblocks, 1)), 0.0);
  parallel_for(nblocks, [&](std::ptrdiff_t b) {
    const std::ptrdiff_t lo = b * reduction_block;
    const std::ptrdiff_t hi = std::min(n, lo + reduction_block);
    double s = lo < hi ? term(lo) : 0.0;
    for (std::ptrdiff_t i = lo + 1; i < hi; ++i) s = std::max(s, term(i));
    partial[static_cast<std::size_t>(b)] = s;
  });
  double total = partial.empty() ? 0.0 : partial[0];
  for (double p : partial) total = std::max(total, p);
  return total;
}

}  // namespace mch::par
