#pragma once

#include <cstddef>
#include <functional>

namespace midec {

/// Worker count from MIDEC_THREADS (0 or unset = hardware concurrency).
unsigned configured_threads();

/// Splits [0, n) into contiguous chunks and runs fn(begin, end) on up to
/// `threads` workers. Chunk boundaries depend only on n and the worker count.
/// After all workers join, the exception of the lowest-index failing chunk is rethrown.
void parallel_for_chunks(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace midec
