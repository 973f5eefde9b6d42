#pragma once

#include <cstddef>
#include <functional>

namespace rmdp {

/// std::thread::hardware_concurrency(), at least 1.
std::size_t default_workers();

/**
 * Runs body(begin, end) over contiguous chunks of [0, n) on up to `workers`
 * threads and waits for all of them. Chunk boundaries depend only on n and
 * the worker count; callers that write disjoint slots get results that do
 * not depend on scheduling. The first exception thrown by a chunk is
 * rethrown after every thread has joined.
 */
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t, std::size_t)>& body);

} // namespace rmdp
