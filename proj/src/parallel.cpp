#include "mch/parallel.hpp"

#include <cstdlib>
#include <string>

namespace mch::par {

namespace {

int detect_max_threads() {
  int limit = 1;
#ifdef _OPENMP
  limit = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("MCH_NUM_THREADS")) {
    try {
      const int requested = std::stoi(env);
      if (requested >= 1) limit = std::min(limit, requested);
    } catch (...) {
      // ignore malformed values, keep the OpenMP default
    }
  }
  return limit;
}

}  // namespace

int max_threads() {
  static const int cached = detect_max_threads();
  return cached;
}

}  // namespace mch::par
