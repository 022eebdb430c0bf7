#pragma once

#include <cstddef>
#include <functional>

namespace maxlip {

// Hardware concurrency, capped by MAXLIP_THREADS when set.
std::size_t worker_count();

// Calls fn(i) for every i in [0, n). Each index is visited exactly once;
// callers write to disjoint slots so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace maxlip
