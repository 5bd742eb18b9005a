#pragma once

#include <cstddef>
#include <functional>

namespace disagree {

// Worker-pool size used by the data-parallel helpers. Defaults to the
// DISAGREE_KIT_THREADS environment variable, else 1. All parallel operations
// in this library compute pure per-index results and reduce sequentially, so
// outputs do not depend on the thread count.
int thread_count();
void set_thread_count(int n);

// Runs fn(i) for i in [0, count), split across thread_count() workers in
// contiguous chunks. fn must be safe to call concurrently for distinct i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace disagree
