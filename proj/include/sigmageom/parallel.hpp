//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace sigmageom {

/// Runs fn(i) for i in [0, n). Each index writes only its own outputs and
/// draws only from its own RNG stream, so the result is identical for any
/// worker count; reductions happen afterwards in index order.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nthreads = std::min<std::size_t>(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nthreads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace sigmageom
