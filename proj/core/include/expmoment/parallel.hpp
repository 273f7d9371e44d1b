#pragma once

#include <cstddef>
#include <functional>

namespace expmoment {

// Worker count for parallel loops: hardware concurrency, capped by the
// EXPMOMENT_THREADS environment variable when it is set to a positive value.
std::size_t worker_thread_count();

// Splits [0, n) into contiguous chunks and runs fn(chunk_index, begin, end)
// on each, possibly concurrently. Chunk boundaries depend only on n, never on
// the worker count, so per-chunk partial results (and reductions merged in
// chunk-index order) are bit-identical however many threads run.
void parallel_chunks(
    std::size_t n,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Number of chunks parallel_chunks will use for a loop of length n.
std::size_t parallel_chunk_count(std::size_t n);

}  // namespace expmoment
