#include "acx/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acx/errors.hpp"

namespace acx {

TimeGrid::TimeGrid(std::vector<double> times) {
  if (times.size() < 3) {
    throw InvalidArgument("TimeGrid: need at least 2 steps, got " +
                          std::to_string(times.empty() ? 0 : times.size() - 1));
  }
  if (times.front() != 0.0) throw InvalidArgument("TimeGrid: first node must be 0");
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    if (!(times[k + 1] > times[k]) || !std::isfinite(times[k + 1])) {
      throw InvalidArgument("TimeGrid: nodes must be finite and strictly increasing (index " +
                            std::to_string(k + 1) + ")");
    }
  }
  times_ = std::make_shared<const std::vector<double>>(std::move(times));
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("TimeGrid: horizon must be positive and finite");
  }
  if (steps < 2) throw InvalidArgument("TimeGrid: need at least 2 steps");
  std::vector<double> t(steps + 1);
  const double n = static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) t[k] = horizon * (static_cast<double>(k) / n);
  t[steps] = horizon;
  return TimeGrid(std::move(t));
}

std::size_t TimeGrid::nearest_index(double t) const {
  const auto& v = *times_;
  auto it = std::lower_bound(v.begin(), v.end(), t);
  if (it == v.begin()) return 0;
  if (it == v.end()) return v.size() - 1;
  const auto hi = static_cast<std::size_t>(it - v.begin());
  return (t - v[hi - 1] <= v[hi] - t) ? hi - 1 : hi;
}

bool operator==(const TimeGrid& a, const TimeGrid& b) noexcept {
  return a.times_ == b.times_ || *a.times_ == *b.times_;
}

}  // namespace acx
