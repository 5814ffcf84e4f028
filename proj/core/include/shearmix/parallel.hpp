#pragma once

#include <cstddef>
#include <functional>

namespace shearmix {

// 0 means: SHEARMIX_THREADS if set, else hardware concurrency.
std::size_t resolve_threads(std::size_t requested);

// Process-wide default used by modules that take threads = 0.
void set_default_threads(std::size_t n);
std::size_t default_threads();

// Calls fn(i) for i in [0, n). Work is claimed dynamically but callers write
// results by index, so output never depends on the thread count. The first
// exception (lowest index) is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, std::size_t threads = 0);

}  // namespace shearmix
