#pragma once

#include <cstddef>
#include <functional>

namespace latentgeom {

/// Worker count: `requested` when positive, else $LATENTGEOM_THREADS, else the
/// hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested = 0);

/// Calls body(i) for i in [0, n) across up to `threads` workers. Each index is
/// handled exactly once; the first exception thrown by a body is rethrown after
/// all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace latentgeom
