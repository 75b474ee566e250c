#pragma once

#include <cstddef>
#include <functional>

namespace proxmag {

/// Worker count: PROXMAG_THREADS if set and > 0, else hardware concurrency.
[[nodiscard]] std::size_t worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks write
/// disjoint outputs, so results do not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 1);

}  // namespace proxmag
