#pragma once

#include <cstddef>
#include <functional>

namespace xyq {

// Worker count for parallel sections: XYQ_WORKERS if set, else hardware concurrency.
unsigned worker_count();

// Runs fn(i) for i in [0, n) on a bounded pool. Tasks must write only to
// their own preallocated slots; the first exception is rethrown after join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace xyq
