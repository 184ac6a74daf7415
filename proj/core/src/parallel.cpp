#include "railmap/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace railmap {

void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::int64_t n_threads = std::min<std::int64_t>(hw, n);
  if (n_threads <= 1 || n < 256) {
    fn(0, n);
    return;
  }
  const std::int64_t chunk = (n + n_threads - 1) / n_threads;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(n_threads));
  for (std::int64_t t = 0; t < n_threads; ++t) {
    const std::int64_t begin = t * chunk;
    const std::int64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back(fn, begin, end);
  }
  for (auto& w : workers) w.join();
}

}  // namespace railmap
