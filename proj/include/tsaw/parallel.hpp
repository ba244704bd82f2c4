#pragma once

#include <cstddef>
#include <functional>

namespace tsaw {

// Worker count: TSAW_WORKERS if set and positive, else hardware concurrency.
unsigned worker_count();

// Override used by tests; 0 restores the environment/hardware default.
void set_worker_count(unsigned workers);

// Calls fn(i) for i in [0, count) on a pool of workers pulling indices from a
// shared counter. fn must write only to slot i of caller-owned storage; the
// caller then folds the slots in index order, which keeps results independent
// of the worker count. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace tsaw
