#pragma once

#include <cstdint>
#include <functional>

namespace railmap {

// Runs fn(begin, end) over contiguous chunks of [0, n) on a small thread
// pool. Callers keep outputs disjoint per index, so results do not depend
// on the partition.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace railmap
