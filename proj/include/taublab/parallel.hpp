#pragma once

#include <cstddef>
#include <functional>

namespace taublab {

/// Worker threads to use: hardware concurrency, capped by TAUBLAB_THREADS.
std::size_t worker_count();

/// Splits [0, n) into contiguous chunks, one per worker, and runs
/// fn(begin, end, worker) on each. Returns after all chunks finish; the
/// first exception thrown by a worker is rethrown.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace taublab
