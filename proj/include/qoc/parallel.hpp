#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace qoc {

// Worker cap: QOC_THREADS if set, else hardware concurrency, at least 1.
inline int worker_count() {
  if (const char* env = std::getenv("QOC_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(0..n-1) across workers and blocks. Tasks must be independent;
// callers store results by index so the outcome is schedule-independent.
template <typename Fn>
void parallel_for(int n, Fn&& fn, int max_threads = 0) {
  int workers = max_threads > 0 ? max_threads : worker_count();
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  workers = std::min(workers, n);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace qoc
