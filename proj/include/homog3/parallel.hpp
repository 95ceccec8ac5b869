#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace homog3 {

// Thread cap: HOMOG3_THREADS, 0 or unset means hardware concurrency.
inline int thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("HOMOG3_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0 && cap < static_cast<long>(hw)) return static_cast<int>(cap);
  }
  return static_cast<int>(hw);
}

// Static block partition; results must be written to disjoint slots so the
// outcome is independent of scheduling.
inline void parallel_for(int n, const std::function<void(int)>& body) {
  const int threads = std::min(thread_budget(), n > 0 ? n : 1);
  if (threads <= 1 || n < 4) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

} // namespace homog3
