// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace bms {

/// Worker count: BM_STABILITY_THREADS when set to a positive integer, else all cores.
int worker_count();

/// Runs body(begin, end) over a static partition of [0, count). Each index is
/// visited exactly once; results must be written per index so the outcome does
/// not depend on the partition. The first exception thrown by a worker is
/// rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 512);

}  // namespace bms
