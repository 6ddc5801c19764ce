#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

namespace acx {

/// Sample mean with standard error sd / sqrt(n).
struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;  ///< `stderr` is a macro in <cstdio>
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
};

/// Two-pass mean and standard error; needs at least 2 samples.
MCEstimate summarize(std::span<const double> samples, std::uint64_t seed = 0);

/// Monte Carlo run configuration. `threads == 0` means hardware concurrency.
struct McConfig {
  std::size_t n_paths = 10000;
  std::uint64_t seed = 42;
  unsigned threads = 0;
};

unsigned resolve_threads(unsigned requested) noexcept;

/// Evaluates fn(i) for i in [0, count) on `threads` workers and returns the
/// results in index order. Work is split into fixed contiguous blocks, so the
/// output does not depend on the thread count.
template <class Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(count);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t block = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * block;
    const std::size_t hi = std::min(count, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
    });
  }
  pool.clear();
  return out;
}

}  // namespace acx
