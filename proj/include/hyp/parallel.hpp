#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hyp {

// Evaluates f(0..n-1) on up to `workers` threads and returns the results in
// index order, so the aggregate never depends on scheduling.
template <class F>
auto parallel_map(std::size_t n, int workers, F f) -> std::vector<decltype(f(std::size_t{0}))> {
  using T = decltype(f(std::size_t{0}));
  std::vector<T> out(n);
  std::size_t w = static_cast<std::size_t>(std::max(1, workers));
  w = std::min(w, n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          out[i] = f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          next = n;
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace hyp
