#pragma once

#include <cstddef>
#include <functional>

namespace phc {

/// Number of worker threads: hardware concurrency, capped by the
/// PHC_LAB_THREADS environment variable (and by `cap` if positive).
int worker_count(int cap = 0);

/// Static-chunked parallel loop over [0, n).  Results must be written to
/// pre-sized per-index storage so reductions stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int cap = 0);

}  // namespace phc
