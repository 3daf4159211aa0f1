#ifndef HTDET_PARALLEL_HPP
#define HTDET_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace htdet {

/// Worker count: HTDET_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
std::size_t thread_budget();

/// Runs body(i) for i in [0, n) over contiguous chunks. Each index is
/// visited exactly once, so results written per index are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace htdet

#endif  // HTDET_PARALLEL_HPP
