#pragma once

#include <functional>

namespace sgfem {

/// Worker count from SGFEM_THREADS (default 1).
int thread_count();

/// Runs fn(i) for i in [0, n) on `threads` workers with a static block split.
/// Callers write results into per-index slots and reduce serially afterwards,
/// so results do not depend on the worker count.
void parallel_for(int n, const std::function<void(int)>& fn, int threads = thread_count());

}  // namespace sgfem
