#ifndef ECRSEG_PARALLEL_HPP
#define ECRSEG_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace ecrseg {

/// Global worker-count cap (CLI --threads). 0 or less means "use all cores".
void set_max_threads(int n);
int max_threads();

/// Runs chunk(begin, end) over [0, n) split into contiguous ranges, one per
/// worker. Chunks must write disjoint outputs; results are then independent
/// of the worker count and of scheduling order.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& chunk);

}  // namespace ecrseg

#endif
