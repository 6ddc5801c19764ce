#include "acx/statistics.hpp"

#include "acx/errors.hpp"

namespace acx {

MCEstimate summarize(std::span<const double> samples, std::uint64_t seed) {
  const std::size_t n = samples.size();
  if (n < 2) throw InvalidArgument("Monte Carlo estimate needs at least 2 paths");
  double sum = 0.0;
  for (double v : samples) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double variance = ss / static_cast<double>(n - 1);
  return MCEstimate{mean, std::sqrt(variance / static_cast<double>(n)), n, seed};
}

unsigned resolve_threads(unsigned requested) noexcept {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace acx
