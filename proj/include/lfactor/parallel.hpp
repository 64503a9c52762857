#pragma once

#include <cstddef>
#include <functional>

namespace lfactor {

/// Number of worker threads: LFACTOR_THREADS if set, else hardware_concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on a small pool of threads. Indices are
/// handed out dynamically; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lfactor
