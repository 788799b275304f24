#pragma once

#include <cstddef>
#include <functional>

namespace ids {

// Worker cap from the IDS_THREADS environment variable, re-read on every
// call so tests can flip it at runtime. Unset: hardware concurrency.
// 0 or 1: sequential.
int max_threads();

// Runs fn(0..n-1) across up to max_threads() workers. Nested calls run
// sequentially, so callers never oversubscribe. Tasks must be independent;
// each should write only to its own output slot, which keeps results
// identical to a sequential run. Exceptions from tasks are rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ids
