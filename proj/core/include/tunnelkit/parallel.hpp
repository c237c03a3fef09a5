#pragma once

#include <cstddef>
#include <functional>

namespace tunnelkit {

// Worker count for sweeps: the explicit request if non-zero, else
// TUNNELKIT_THREADS if set, else hardware concurrency. Never exceeds `tasks`.
std::size_t thread_budget(std::size_t requested, std::size_t tasks);

// Runs body(i) for i in [0, count) on up to `threads` workers. Exceptions thrown
// by body are rethrown (first one wins) after all workers finish.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace tunnelkit
