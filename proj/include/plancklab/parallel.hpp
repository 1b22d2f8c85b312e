// Deterministic parallel helpers.
//
// parallel_for hands each worker a contiguous index range; workers may only
// write to their own slots of a pre-sized output, so results never depend on
// the schedule. pairwise_sum reduces a vector in a fixed tree order, giving
// bit-stable floating-point aggregates for a fixed element order.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace plancklab {

inline int default_worker_count() {
  if (const char* env = std::getenv("PLANCKLAB_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return std::min(w, 64);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

inline std::atomic<int>& worker_count_state() {
  static std::atomic<int> w{default_worker_count()};
  return w;
}

inline int worker_count() { return worker_count_state().load(); }

inline void set_worker_count(int w) {
  if (w < 1) throw std::invalid_argument("worker count must be >= 1");
  worker_count_state().store(w);
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    const std::size_t lo = n * t / workers;
    const std::size_t hi = n * (t + 1) / workers;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

inline double pairwise_sum(std::span<const double> v) {
  return pairwise_sum(v.data(), v.size());
}

inline double pairwise_mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean of empty vector");
  return pairwise_sum(v) / static_cast<double>(v.size());
}

}  // namespace plancklab
