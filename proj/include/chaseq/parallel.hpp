#pragma once

// OpenMP variants of the hot loops. The serial functions stay the reference
// implementations; these must return identical results.

#include <cstddef>
#include <vector>

#include "chaseq/chase.hpp"

namespace chaseq {

/// Same result and order as find_triggers.
std::vector<Trigger> find_triggers_parallel(const Instance& instance, const RuleSet& rules);

/// Runs body(i) for every i in [0, n) across threads. `body` must not throw.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

int worker_count();

}  // namespace chaseq
