// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>

namespace gaussreg {

/// Worker count: GAUSSREG_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
[[nodiscard]] std::size_t thread_count();

/// Runs body(begin, end) over a fixed partition of [0, n). The partition
/// depends only on n, so results written per index are schedule-independent.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace gaussreg
