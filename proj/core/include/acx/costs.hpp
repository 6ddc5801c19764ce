#pragma once

#include <optional>
#include <vector>

#include "acx/impact_params.hpp"
#include "acx/model.hpp"
#include "acx/statistics.hpp"
#include "acx/strategies.hpp"

namespace acx {

/// Realized execution cost of one trajectory on one path:
///   C(x) = -X S_0 - int x dS + eta int xdot^2 + gamma X^2 / 2
/// plus, optionally, the risk term lambda_tilde int x (S + gamma x) dt.
///
/// Conventions: int x dS uses left endpoints; int x S dt is the trapezoid rule
/// on the product; int x^2 dt is exact for the piecewise-linear trajectory.
struct CostBreakdown {
  double total = 0.0;
  double price_term = 0.0;   ///< -sum x_k (S_{k+1} - S_k)
  double temporary = 0.0;    ///< eta sum v_k^2 dt_k
  double permanent = 0.0;    ///< gamma X^2 / 2
  double cash_anchor = 0.0;  ///< -X S_0
  double risk_term = 0.0;    ///< 0 unless requested
  bool includes_risk = false;
};

CostBreakdown realized_cost(const ExecutionTrajectory& trajectory, const PricePath& path,
                            const ImpactParams& params, bool include_risk);

/// Pieces of the reduced functional int x dY + int (xdot^2 + nu^2 x^2) dt.
struct ReducedCost {
  double price_noise = 0.0;  ///< -(1/eta) sum x_k (S_{k+1} - S_k)
  double risk = 0.0;         ///< lambda int x S dt
  double kinetic = 0.0;      ///< sum v_k^2 dt_k
  double potential = 0.0;    ///< nu^2 int x^2 dt

  double total() const noexcept { return price_noise + risk + kinetic + potential; }
  /// int (xdot^2 + lambda S x + nu^2 x^2) dt: same expectation as total()
  /// when S is a martingale, without the zero-mean price_noise part.
  double martingale_objective() const noexcept { return risk + kinetic + potential; }
};

ReducedCost reduced_functional_terms(const ExecutionTrajectory& trajectory, const PricePath& path,
                                     const ReducedObjective& objective);

double reduced_functional(const ExecutionTrajectory& trajectory, const PricePath& path,
                          const ReducedObjective& objective);

/// Partial sums of the reduced functional: element k covers [0, t_k].
std::vector<double> running_reduced_functional(const ExecutionTrajectory& trajectory,
                                               const PricePath& path,
                                               const ReducedObjective& objective);

/// Three-term split of an optimal value: leading X^2 term, term linear in X,
/// and the (non-positive) quadratic remainder.
struct ValueComponents {
  double leading = 0.0;
  double linear = 0.0;
  double quadratic = 0.0;

  double sum() const noexcept { return leading + linear + quadratic; }
};

/// Optimal value of the reduced problem.
struct ValueReport {
  double closed_form = 0.0;
  /// Nonzero only when a component had to be estimated by simulation.
  double closed_form_std_error = 0.0;
  ValueComponents components;
  /// Reduced functional of the optimal strategy averaged over simulated paths.
  std::optional<MCEstimate> mc;
};

/// Options for the value functions. With `mc` set, the optimal strategy is
/// also simulated on `n_steps` steps and its mean reduced cost reported.
struct ValueOptions {
  std::size_t n_steps = 500;
  std::optional<McConfig> mc;
  std::size_t quadrature_intervals = 1000;
};

/// Martingale law, nu > 0:
///   nu X^2 coth(nu T) + lambda X S_0 tanh(nu T / 2) / nu
///     - lambda^2 / (4 nu^2) int_0^T E[S_t^2] tanh^2(nu (T-t) / 2) dt.
/// Laws without a closed-form second moment need options.mc (the remainder is
/// then estimated); otherwise CapabilityError.
ValueReport value_martingale(double position, double horizon, const ReducedObjective& objective,
                             const Model& model, const ValueOptions& options = {});

/// Martingale law, nu = 0:
///   X^2 / T + lambda X S_0 T / 2 - lambda^2 / 16 int_0^T E[S_t^2] (T-t)^2 dt.
ValueReport value_martingale_nu0(double position, double horizon,
                                 const ReducedObjective& objective, const Model& model,
                                 const ValueOptions& options = {});

/// General law (either nu): leading term, linear term from the kernel at t = 0,
/// and -1/4 E[int H_t^2 dt] estimated over `mc` simulated paths on `grid`.
ValueReport value_semimartingale(double position, const TimeGrid& grid,
                                 const ReducedObjective& objective, const Model& model,
                                 const McConfig& mc);

}  // namespace acx
