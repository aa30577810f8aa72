#pragma once

#include <cstddef>
#include <functional>

namespace cascade {

/// Worker count: hardware concurrency, capped by CASCADE_RISK_THREADS when set.
[[nodiscard]] unsigned worker_count();

/// Calls body(i) for i in [0, count). Iterations may run concurrently; callers
/// write results into per-index slots so output never depends on scheduling.
/// The first exception thrown by any iteration is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace cascade
