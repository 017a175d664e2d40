#pragma once

#include <cstddef>
#include <functional>

namespace crbloc {

// Worker threads used by parallel_for. The CRB_LOC_THREADS environment
// variable caps the count; 0 or unset means one worker per hardware thread.
int worker_count();

// Runs body(i) for every i in [0, n), possibly across threads. Callers own
// the output slots indexed by i, so results are deterministic regardless of
// scheduling. The first exception thrown by a body is rethrown after all
// workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace crbloc
