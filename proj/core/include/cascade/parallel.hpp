#pragma once

#include <cstddef>
#include <functional>

namespace cascade {

/// Worker count used by parallel_for. Reads CASCADE_LAB_THREADS, falling back
/// to the hardware concurrency. Always >= 1.
unsigned worker_count();

/// Runs fn(i) for i in [0, n). Work is split into contiguous chunks, one per
/// worker; results must be written to independent slots so the outcome does
/// not depend on the number of workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace cascade
