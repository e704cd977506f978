#pragma once

#include <cstddef>
#include <functional>

namespace nadyn {

// Worker count used by parallel maps when the caller does not pass one.
// Initialised from NADYN_THREADS, falling back to hardware concurrency.
std::size_t default_thread_count();
void set_default_thread_count(std::size_t threads);

// Calls body(i) for every i in [0, count). Iterations must be independent.
// The first exception thrown by any iteration is rethrown after all workers
// have joined.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

} // namespace nadyn
