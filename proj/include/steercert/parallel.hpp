#pragma once

#include <cstddef>
#include <functional>

namespace steercert {

// Worker count: STEERCERT_THREADS if set to a positive integer, otherwise the
// hardware concurrency.
std::size_t thread_count();

// Calls fn(i) for i in [0, n). Iterations must be independent; callers write
// results into slot i so output order never depends on scheduling. The first
// exception thrown by any iteration is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace steercert
