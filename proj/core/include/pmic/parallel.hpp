#pragma once

#include <cstddef>
#include <functional>

namespace pmic {

/// Hardware concurrency, at least 1.
int default_workers() noexcept;

/// Runs body(i) for i in [0, count) on up to `workers` threads. Indices are
/// claimed dynamically, so `body` must only write to per-index state. If any
/// calls throw, the exception from the lowest index is rethrown after all
/// workers have joined.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace pmic
