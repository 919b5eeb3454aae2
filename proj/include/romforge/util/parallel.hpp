#pragma once

#include <cstddef>
#include <functional>

namespace romforge::util {

/// Worker count: ROMFORGE_THREADS if set and >=1, else hardware concurrency.
int thread_count();

/// Chunked parallel loop over [0, n). Each worker writes only to indices it
/// owns, so results are bitwise independent of the schedule. Falls back to a
/// plain loop when n is small or a single worker is configured.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace romforge::util
