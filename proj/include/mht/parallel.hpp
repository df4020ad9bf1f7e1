#pragma once

// Minimal deterministic parallel map: static index partition over worker
// threads, results written into caller-owned slots, so the merge is
// order-independent by construction.

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace mht {

inline unsigned resolve_thread_count(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

template <typename Fn>
inline void parallel_for_indexed(std::size_t n, int threads, Fn&& fn) {
  const unsigned nt = resolve_thread_count(threads);
  if (nt <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nt) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace mht
