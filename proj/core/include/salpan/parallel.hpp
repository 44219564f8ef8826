#pragma once

#include <cstddef>
#include <functional>

namespace salpan {

/// Worker count: SALPAN_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t default_thread_count();

/// Run fn(i) for i in [begin, end) on up to `threads` workers. Each index is
/// visited exactly once; results must not depend on scheduling.
void parallel_for(std::size_t begin, std::size_t end, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace salpan
