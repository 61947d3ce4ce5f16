#pragma once

#include <cstddef>
#include <functional>

namespace qclock::par {

/// Worker count for parallel kernels: CLOCK_NUM_WORKERS if set (clamped
/// to >= 1), otherwise the OpenMP default. 1 when built without OpenMP.
int worker_count();

/// Run fn(i) for i in [0, n) on the worker pool with a static schedule.
/// Each index writes only its own outputs, so results are bit-identical
/// for every thread count, including the serial fallback.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace qclock::par
