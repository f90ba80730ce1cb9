#ifndef TOKENLAB_PARALLEL_HPP
#define TOKENLAB_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace tokenlab {

// Worker count: hardware concurrency, capped by TOKEN_LAB_THREADS if set.
std::size_t worker_count();

// Runs body(i) for i in [0, n).  Work items must be independent; callers
// key any output by index so results do not depend on scheduling order.
// Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tokenlab

#endif  // TOKENLAB_PARALLEL_HPP
