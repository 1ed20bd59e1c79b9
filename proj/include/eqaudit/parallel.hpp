#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

#include "eqaudit/types.hpp"

namespace eqaudit {

// Splits [0, n) into at most `threads` contiguous chunks, reduces each chunk
// on its own thread and returns the partials in chunk order. Integer partials
// recombine exactly; floating-point partials agree across thread counts to
// ~1e-12 relative, which is the documented tolerance for scans.
template <typename T, typename ChunkFn>
std::vector<T> map_chunks(Index n, int threads, ChunkFn fn) {
  if (n <= 0) return {};
  const int used = static_cast<int>(std::min<Index>(std::max(threads, 1), n));
  std::vector<Index> bounds(used + 1);
  for (int c = 0; c <= used; ++c) bounds[c] = n * c / used;

  std::vector<T> partials(used);
  if (used == 1) {
    partials[0] = fn(Index{0}, n);
    return partials;
  }

  std::vector<std::exception_ptr> errors(used);
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (int c = 0; c < used; ++c) {
    pool.emplace_back([&, c] {
      try {
        partials[c] = fn(bounds[c], bounds[c + 1]);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& worker : pool) worker.join();
  for (auto& error : errors)
    if (error) std::rethrow_exception(error);
  return partials;
}

}  // namespace eqaudit
