#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace mosharp {

/// Process-wide worker count used by grid operations. Defaults to the value of
/// the MOSHARP_WORKERS environment variable, or 1 when unset.
int worker_count();
void set_worker_count(int workers);

/// Runs body(begin, end) over a static, contiguous partition of [0, n).
/// Each index is owned by exactly one worker, so writes into disjoint output
/// slots are race free and the result does not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Pairwise summation in index order. The recursion tree depends only on the
/// length of the input, which makes reductions bitwise reproducible.
double pairwise_sum(std::span<const double> values);

}  // namespace mosharp
