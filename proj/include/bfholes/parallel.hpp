#pragma once

#include <cstddef>
#include <functional>

namespace bfholes {

/// Worker count from BFHOLES_THREADS; unset or invalid means all hardware threads.
int worker_count();

/// Runs body(chunk) for every chunk in [0, chunks) on `workers` threads (0 = worker_count()).
/// Callers write per-chunk results into their own slots and reduce them in chunk order,
/// which keeps results independent of the thread count.
void parallel_for_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body, int workers = 0);

inline constexpr std::size_t kTrialChunk = 256;

}  // namespace bfholes
