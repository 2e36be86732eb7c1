#pragma once

#include <cstddef>
#include <functional>

namespace broadwell {

/// Process-wide worker count used by the lattice maps. 0 restores the
/// default (one worker per hardware thread).
void set_workers(std::size_t n);
std::size_t workers();

/// Calls body(begin, end) on disjoint contiguous chunks of [0, n). Chunks are
/// a static partition, so each index is always handled by the same code path
/// and results do not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace broadwell
