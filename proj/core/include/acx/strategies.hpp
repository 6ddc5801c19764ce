#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "acx/impact_params.hpp"
#include "acx/kernel.hpp"
#include "acx/model.hpp"
#include "acx/time_grid.hpp"

namespace acx {

/// Piecewise-linear holdings on a grid: x_{k+1} = x_k + v_k dt_k.
///
/// Holdings may go negative; nothing here clips them.
struct ExecutionTrajectory {
  TimeGrid grid;
  std::vector<double> holdings;  ///< x_0 .. x_n
  std::vector<double> rates;     ///< v_0 .. v_{n-1}, shares per unit time
  double initial_position = 0.0;

  /// Builds rates from node differences. Pins x_0 = X and x_n = 0 exactly;
  /// throws InvalidArgument if the holdings vector has the wrong length.
  static ExecutionTrajectory from_holdings(const TimeGrid& grid, std::vector<double> holdings);

  std::size_t size() const noexcept { return holdings.size(); }
  double operator[](std::size_t k) const noexcept { return holdings[k]; }
};

/// Index of the first node with negative holdings, if any.
std::optional<std::size_t> first_negative_crossing(const ExecutionTrajectory& trajectory);

/// Constant-rate liquidation x_t = X (T - t) / T.
ExecutionTrajectory vwap(double position, const TimeGrid& grid);

/// Deterministic mean-variance schedule X sinh(kappa (T-t)) / sinh(kappa T),
/// kappa = sqrt(alpha sigma^2 / (2 eta)). All three parameters must be > 0.
ExecutionTrajectory mean_variance(double position, const TimeGrid& grid, double alpha,
                                  double sigma, double eta);

/// Robust optimal strategy for nu > 0:
///   x_t = sinh(nu(T-t)) [ X / sinh(nu T) - lambda/(2 nu) int_0^t S_s / (1 + cosh(nu(T-s))) ds ],
/// with the running integral taken by the trapezoid rule over the observed path.
/// Depends on the path only, never on the law that generated it.
ExecutionTrajectory gs_martingale(double position, const TimeGrid& grid,
                                  const ReducedObjective& objective, const PricePath& path);

/// nu = 0 limit: x_t = (T-t)/T [ X - lambda T / 4 int_0^t S_s ds ].
ExecutionTrajectory gs_martingale_nu0(double position, const TimeGrid& grid,
                                      const ReducedObjective& objective, const PricePath& path);

/// Optimal strategy for a general price law (nu > 0):
///   x_t = sinh(nu(T-t)) [ X / sinh(nu T) - 1/2 int_0^t H_s / sinh(nu(T-s)) ds ],
/// where H_s = E[int_s^T sinh(nu(T-u)) dY_u | F_s] / sinh(nu(T-s)).
ExecutionTrajectory gs_semimartingale(double position, const TimeGrid& grid,
                                      const ReducedObjective& objective, const Model& model,
                                      const PricePath& path);

/// nu = 0 version: x_t = (T-t)/T ( X - 1/2 int_0^t T/(T-s)^2 E[int_s^T (T-u) dY_u | F_s] ds ).
ExecutionTrajectory gs_semimartingale_nu0(double position, const TimeGrid& grid,
                                          const ReducedObjective& objective, const Model& model,
                                          const PricePath& path);

/// gs_semimartingale / gs_semimartingale_nu0 with the kernel table built once,
/// for evaluating the same law on many paths. nu > 0 selects the sinh form,
/// nu = 0 the linear form.
class SemimartingaleRule {
 public:
  SemimartingaleRule(double position, const TimeGrid& grid, const ReducedObjective& objective,
                     const Model& model);

  ExecutionTrajectory operator()(const PricePath& path) const;

  /// H_k at price s: the kernel divided by its weight at t_k (0 at t_n).
  double h(std::size_t k, double s) const noexcept { return kernel_.normalized(k, s); }
  const YKernel& kernel() const noexcept { return kernel_; }

 private:
  double position_;
  ReducedObjective objective_;
  YKernel kernel_;
};

/// Minimizer of the expected execution cost under a general law: the nu = 0
/// strategy with lambda = 0, so only the drift of S enters (through
/// Y = -(S - S_0)/eta). Exactly VWAP for martingales.
ExecutionTrajectory expected_cost_minimizer(double position, const TimeGrid& grid, double eta,
                                            const Model& model, const PricePath& path);

}  // namespace acx
