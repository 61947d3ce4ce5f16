#include "qclock/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qclock::par {

int worker_count() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("CLOCK_NUM_WORKERS")) {
    try {
      const int requested = std::stoi(env);
      if (requested >= 1) n = std::min(n, requested);
    } catch (...) {
      // Unparseable value: keep the default.
    }
  }
  return std::max(n, 1);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
#ifdef _OPENMP
  const int workers = worker_count();
  if (workers > 1 && n > 1) {
    const long long count = static_cast<long long>(n);
#pragma omp parallel for num_threads(workers) schedule(static)
    for (long long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace qclock::par
