#pragma once

#include <cstddef>
#include <functional>

namespace ssarf {

// Runs body(i) for i in [0, count) on up to `threads` worker threads.
// Work is split into contiguous blocks; results must only depend on i, never on
// scheduling. If any body throws, the exception of the lowest index is rethrown
// after all workers have joined.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

} // namespace ssarf
