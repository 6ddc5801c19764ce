#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "acx/impact_params.hpp"
#include "acx/model.hpp"
#include "acx/time_grid.hpp"

namespace acx {

/// Deterministic weight w(u) multiplying dY_u in the future-increment kernel.
struct Weight {
  enum class Kind { Sinh, Linear };
  Kind kind;
  double nu = 0.0;  ///< used by Sinh only

  /// u -> sinh(nu (T - u)).
  static Weight sinh(double nu) { return {Kind::Sinh, nu}; }
  /// u -> T - u.
  static Weight linear() { return {Kind::Linear, 0.0}; }

  double operator()(double horizon, double u) const noexcept;
};

/// E[ int_t^T w(u) dY_u | S_t = s ] for Y_u = -(S_u - S_0)/eta + lambda int_0^u S.
///
/// The integrand -(1/eta) d/du m(u) + lambda m(u), with m the conditional mean,
/// is interpolated linearly between the nodes of `tail` (which must run from t
/// to T) and integrated exactly against w. Martingale laws therefore come out
/// exact up to rounding; otherwise the error is O(h^2).
double weighted_future_Y(const Model& model, double t, double s, std::span<const double> tail,
                         Weight weight, const ReducedObjective& objective);

/// Per-node kernel K_k(s) = E[ int_{t_k}^T w dY | S_{t_k} = s ] on a fixed grid.
///
/// Every implemented law has a conditional mean affine in s, so K_k(s) =
/// slope_k * s + offset_k; the table stores those coefficients so that
/// evaluating along a simulated path costs O(n).
class YKernel {
 public:
  YKernel(const Model& model, const TimeGrid& grid, Weight weight,
          const ReducedObjective& objective);

  const TimeGrid& grid() const noexcept { return grid_; }
  Weight weight() const noexcept { return weight_; }

  double operator()(std::size_t k, double s) const noexcept { return slope_[k] * s + offset_[k]; }
  double slope(std::size_t k) const noexcept { return slope_[k]; }
  double offset(std::size_t k) const noexcept { return offset_[k]; }

  /// H_k = K_k(s) / w(t_k), the normalized kernel driving the optimal feedback.
  /// At the last node the limit value 0 is returned.
  double normalized(std::size_t k, double s) const noexcept;

 private:
  TimeGrid grid_;
  Weight weight_;
  std::vector<double> slope_;
  std::vector<double> offset_;
};

namespace detail {

/// Exact integrals of w against the two hat functions of the cell [a, b]:
/// first = int w(u) (b - u)/(b - a) du, second = int w(u) (u - a)/(b - a) du.
struct CellWeights {
  double left;
  double right;
};
CellWeights cell_weights(Weight weight, double horizon, double a, double b) noexcept;

}  // namespace detail
}  // namespace acx
