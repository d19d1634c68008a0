#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace ciregions {

/// Worker count: hardware concurrency capped by the CIREGIONS_THREADS
/// environment variable (0 or unset means no cap).
inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("CIREGIONS_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap > 0 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
  }
  return hw;
}

/// Runs f(i) for i in [0,n). Tasks must be independent; each writes only its
/// own output slot, so results are deterministic regardless of thread count.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  unsigned workers = worker_count();
  if (n <= 1 || workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ciregions
