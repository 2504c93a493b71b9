#pragma once

#include <cstddef>
#include <functional>

namespace debris {

// Process-wide cap on worker threads. Never affects results: all parallel
// work is split into blocks whose boundaries do not depend on this value and
// reductions run in block order.
void set_thread_count(std::size_t n);
std::size_t thread_count();

// Calls fn(i) for i in [0, n) using up to thread_count() workers. Work items
// must write to disjoint outputs.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace debris
