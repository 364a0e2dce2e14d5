#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace qtopo {

// Runs body(i) for i in [0, n) on up to `threads` workers with a static
// strided partition. Results must be written to index-addressed storage so
// the outcome does not depend on the worker count. The first exception (by
// index) is rethrown after all workers join.
template <class Body>
void parallel_for(int n, int threads, Body&& body) {
  const int workers = std::clamp(threads, 1, std::max(1, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < n; i += workers) {
          try {
            body(i);
          } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace qtopo
