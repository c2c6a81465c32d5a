#pragma once

#include <cstddef>
#include <functional>

namespace kglab {

// Number of worker threads: hardware concurrency capped by KGLAB_THREADS.
unsigned worker_count();

// Runs body(chunk_index) for chunk_index in [0, chunks). Chunks are handed
// out dynamically, so callers must write results into per-chunk slots and
// reduce them in index order afterwards to stay independent of thread count.
void parallel_chunks(std::size_t chunks,
                     const std::function<void(std::size_t)>& body);

}  // namespace kglab
