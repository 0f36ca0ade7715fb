#pragma once

#include <cstddef>
#include <functional>

namespace cskde {

/// Worker count: CSKDE_THREADS when set (a positive integer), otherwise the
/// hardware concurrency. Throws ValidationError on a malformed value.
std::size_t worker_count();

/// Runs fn(i) for every i in [0, n) on up to worker_count() threads.
///
/// Each index must write only to its own output slot, which makes results
/// independent of the worker count. Calls made from inside a worker run
/// inline. If any call throws, the exception of the lowest failing index is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace cskde
