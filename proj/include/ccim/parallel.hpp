#pragma once

// Minimal fork-join helper: fixed contiguous chunks, so the chunk a row lands in does
// not depend on scheduling and outputs written per chunk merge deterministically.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ccim {

/// Calls body(chunk, begin, end) over [0, n) split into `chunks` contiguous pieces,
/// on up to `threads` workers. The first exception thrown is rethrown.
template <class Body>
void parallel_chunks(std::int64_t n, int chunks, int threads, Body body) {
  chunks = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(chunks, n)));
  auto bounds = [&](int c) { return n * c / chunks; };
  if (threads <= 1 || chunks == 1) {
    for (int c = 0; c < chunks; ++c) body(c, bounds(c), bounds(c + 1));
    return;
  }
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  const int workers = std::min(threads, chunks);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int c = w; c < chunks; c += workers) {
        try {
          body(c, bounds(c), bounds(c + 1));
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ccim
