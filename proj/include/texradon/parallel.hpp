// Deterministic work partitioning.
//
// Loops are split into fixed-size chunks that depend only on the problem
// size, never on the worker count.  Each index writes its own output slot
// (or each chunk produces its own partial, combined in chunk order), so the
// result is bit-for-bit identical for any thread count.
#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace texradon {

inline std::atomic<int>& thread_count_storage() {
  static std::atomic<int> value{1};
  return value;
}

inline int thread_count() { return thread_count_storage().load(); }

inline void set_thread_count(int n) {
  thread_count_storage().store(n < 1 ? 1 : n);
}

// Runs body(i) for i in [0, n).  Bodies must only touch state owned by
// index i; under that contract the output is independent of thread count.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const int workers = thread_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  // Chunk size depends on n only.
  const std::size_t chunk = (n + 255) / 256 > 1 ? (n + 255) / 256 : 1;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      const std::size_t lo = c * chunk;
      const std::size_t hi = lo + chunk < n ? lo + chunk : n;
      for (std::size_t i = lo; i < hi; ++i) body(i);
    }
  };
  std::vector<std::thread> pool;
  const int spawn = workers - 1 < int(nchunks) ? workers - 1 : int(nchunks);
  pool.reserve(std::size_t(spawn));
  for (int t = 0; t < spawn; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

}  // namespace texradon
