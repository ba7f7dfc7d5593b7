#pragma once

#include <cstddef>
#include <functional>

namespace fkswitch {

/// Effective worker count: an explicit request wins, then the
/// FKSWITCH_THREADS environment cap, then hardware parallelism.
int worker_count(int requested = 0);

/// Runs task(index) for index in [begin, end) on up to `threads` workers.
/// Tasks are claimed from an atomic counter; each index is executed exactly
/// once, so results must be written to per-index slots to stay deterministic.
void parallel_for(std::size_t begin, std::size_t end, int threads,
                  const std::function<void(std::size_t)>& task);

}  // namespace fkswitch
