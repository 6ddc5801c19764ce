#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace acx {

/// Discretization 0 = t_0 < t_1 < ... < t_n = T of the trading interval.
///
/// Immutable; copies share storage, so paths and trajectories can carry
/// their grid by value.
class TimeGrid {
 public:
  /// Throws InvalidArgument unless the times are strictly increasing, start
  /// at exactly 0, end at a positive horizon and contain at least 3 nodes.
  explicit TimeGrid(std::vector<double> times);

  /// n equal steps on [0, horizon]; the last node is exactly `horizon`.
  static TimeGrid uniform(double horizon, std::size_t steps);

  double horizon() const noexcept { return times_->back(); }
  std::size_t steps() const noexcept { return times_->size() - 1; }
  std::size_t size() const noexcept { return times_->size(); }

  double operator[](std::size_t k) const noexcept { return (*times_)[k]; }
  double dt(std::size_t k) const noexcept { return (*times_)[k + 1] - (*times_)[k]; }
  double remaining(std::size_t k) const noexcept { return horizon() - (*times_)[k]; }

  std::span<const double> times() const noexcept { return *times_; }

  /// Index of the node closest to t (ties go to the earlier node).
  std::size_t nearest_index(double t) const;

  /// Same node values (pointer-equal grids compare equal without a scan).
  friend bool operator==(const TimeGrid& a, const TimeGrid& b) noexcept;

 private:
  std::shared_ptr<const std::vector<double>> times_;
};

}  // namespace acx
