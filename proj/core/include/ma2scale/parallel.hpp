#pragma once

#include <cstdint>
#include <functional>

namespace ma2 {

/// Number of worker threads: hardware concurrency capped by the
/// MA2SCALE_THREADS environment variable (minimum 1).
int worker_count();

/// Runs fn(i) for i in [0, n). Work is split into contiguous chunks, one per
/// worker; per-index outputs must be independent so results do not depend on
/// the worker count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

} // namespace ma2
