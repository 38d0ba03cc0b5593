#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace smlink {

// Thread count used by the Monte Carlo loops: SMLINK_THREADS if set,
// otherwise hardware concurrency. Results never depend on this value;
// work is split into fixed chunks keyed by chunk index, threads only
// decide who evaluates which chunk.
inline unsigned default_threads() {
  if (const char* env = std::getenv("SMLINK_THREADS")) {
    long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Run fn(chunk_index) for chunk_index in [0, n_chunks) on up to n_threads
// threads. fn must write only to storage owned by its chunk index.
template <typename Fn>
void for_each_chunk(std::size_t n_chunks, unsigned n_threads, Fn&& fn) {
  if (n_threads == 0) n_threads = default_threads();
  if (n_threads <= 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      fn(c);
    }
  };
  std::vector<std::thread> pool;
  unsigned n = std::min<std::size_t>(n_threads, n_chunks);
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace smlink
