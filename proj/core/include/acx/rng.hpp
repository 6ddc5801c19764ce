#pragma once

#include <cstdint>
#include <random>

namespace acx {

/// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of substream `stream` under master seed `seed`.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

/// Generator for one simulated path. Path i of a Monte Carlo run with master
/// seed s always draws from PathRng(s, i), whatever thread evaluates it.
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t stream) : engine_(substream_seed(seed, stream)) {}

  double normal() { return normal_(engine_); }
  double uniform() { return std::generate_canonical<double, 53>(engine_); }
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::uint64_t>(mean)(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace acx
