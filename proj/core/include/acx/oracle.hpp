#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "acx/impact_params.hpp"
#include "acx/model.hpp"
#include "acx/montecarlo.hpp"
#include "acx/statistics.hpp"
#include "acx/strategies.hpp"

namespace acx {

// ---------------------------------------------------------------------------
// Exact dynamic programming on a binomial martingale tree
// ---------------------------------------------------------------------------

/// V_k(x; node j) = a_k x^2 + b_k[j] x + c_k[j]: optimal expected cost-to-go
/// of the discrete problem  sum_k (v_k^2 + lambda S_k x_k + nu^2 x_k^2) dt.
/// a_n is +inf (any leftover position at T is infeasible); index n stores 0s.
struct QuadraticValue {
  std::vector<double> a;
  std::vector<std::vector<double>> b;
  std::vector<std::vector<double>> c;

  double operator()(std::size_t k, std::size_t node, double x) const noexcept {
    return (a[k] * x + b[k][node]) * x + c[k][node];
  }
};

/// Optimal feedback x_{k+1} = gain_k x_k + shift_k[j] for every tree node.
struct TreeDpResult {
  BinomialMartingale tree;
  TimeGrid grid;
  QuadraticValue value;
  std::vector<double> gain;
  std::vector<std::vector<double>> shift;

  double next_holding(std::size_t k, std::size_t node, double x) const noexcept {
    return gain[k] * x + shift[k][node];
  }

  /// Prices along a node sequence; ups[k] is the up-move count at step k
  /// (ups[0] = 0, increments of 0 or 1).
  PricePath path(std::span<const std::size_t> ups) const;

  /// Holdings produced by the optimal feedback along a node sequence.
  ExecutionTrajectory follow(double position, std::span<const std::size_t> ups) const;
};

/// Backward induction with the last trade forced to v_{n-1} = -x_{n-1}/dt.
/// Each step minimizes a quadratic in the next holding in closed form.
TreeDpResult tree_dp(const BinomialMartingale& tree, double horizon,
                     const ReducedObjective& objective);

/// Random up/down node sequence with the tree's martingale probability.
std::vector<std::size_t> sample_tree_nodes(const BinomialMartingale& tree, std::uint64_t seed,
                                           std::uint64_t stream);

/// Node sequence whose log-price follows log(S_t / s0) ~ shape(t / horizon) as
/// closely as single up/down moves allow.
std::vector<std::size_t> shaped_tree_nodes(const BinomialMartingale& tree,
                                           const std::function<double(double)>& shape);

/// Four smooth log-price shapes of amplitude ~ `scale` (rising, falling, sine, tent).
/// Unlike sampled paths, they keep the same continuous-time form as the tree is
/// refined, so errors measured on them converge cleanly.
std::vector<std::vector<std::size_t>> reference_tree_paths(const BinomialMartingale& tree, double scale);

// ---------------------------------------------------------------------------
// Deterministic Euler-Lagrange solver
// ---------------------------------------------------------------------------

/// Minimizes the discrete functional
///   sum_k (x_{k+1} - x_k)^2 / dt_k + sum_k w_k (y_k x_k + nu^2 x_k^2),
///   y_k = lambda m_k - m'_k / eta,  w_k trapezoid node weights,
/// with x_0 = X, x_n = 0, by a direct tridiagonal solve. `mean` is the frozen
/// price path m, `mean_rate` its time derivative (empty means zero).
ExecutionTrajectory euler_lagrange_deterministic(double position, const TimeGrid& grid,
                                                 const ReducedObjective& objective,
                                                 std::span<const double> mean,
                                                 std::span<const double> mean_rate = {});

/// Largest absolute first-order residual of that functional at `trajectory`.
double euler_lagrange_residual(const ExecutionTrajectory& trajectory,
                               const ReducedObjective& objective, std::span<const double> mean,
                               std::span<const double> mean_rate = {});

// ---------------------------------------------------------------------------
// Monte Carlo optimality checks
// ---------------------------------------------------------------------------

/// `count` piecewise-linear directions on the grid with `knots` random interior
/// knots, zero at both ends, scaled to max |phi| = 1.
std::vector<std::vector<double>> random_directions(const TimeGrid& grid, std::size_t count,
                                                   std::uint64_t seed, std::size_t knots = 4);

/// Direction from VWAP towards the optimal rule evaluated on the frozen path
/// S = S_0, scaled to max |phi| = 1.
std::vector<double> aligned_direction(double position, const TimeGrid& grid,
                                      const ReducedObjective& objective, const Model& model);

struct DirectionResult {
  MCEstimate slope;         ///< (J(+d) - J(-d)) / (2d), paired per path
  MCEstimate gap_plus;      ///< J(+d) - J(0)
  MCEstimate gap_minus;     ///< J(-d) - J(0)
  double curvature = 0.0;   ///< (J(+d) + J(-d)) / 2 - J(0); deterministic
  bool stationary = false;  ///< |slope| <= 3 se + tolerance
  bool convex = false;      ///< curvature > 0 and both gaps > -(3 se + tolerance)
};

struct PerturbationReport {
  double delta = 0.0;
  std::vector<DirectionResult> directions;
  bool all_stationary = false;
  bool all_convex = false;
  /// Some direction has a slope significantly different from zero, i.e. the
  /// strategy can be improved along it.
  bool descent_found = false;
};

struct CheckTolerance {
  double sigmas = 3.0;
  /// Absolute allowance for time-discretization bias; the only slack left
  /// when the law is deterministic and every standard error is zero.
  double absolute = 1e-5;
};

/// J(e) = mean reduced functional at x + e phi on common paths, e in {-d, 0, d}.
PerturbationReport perturbation_check(const StrategyRule& rule, const Model& model,
                                      const ReducedObjective& objective, double position,
                                      const TimeGrid& grid, const McConfig& mc,
                                      std::span<const std::vector<double>> directions,
                                      double delta = 0.05, CheckTolerance tolerance = {});

struct CheckpointResult {
  double time = 0.0;
  std::size_t node = 0;
  MCEstimate value;        ///< E[C~_t]
  MCEstimate increment;    ///< C~_t - C~_{previous checkpoint}, paired
  MCEstimate from_start;   ///< C~_t - C~_0, paired
};

struct SubmartingaleReport {
  std::vector<CheckpointResult> checkpoints;  ///< first entry is t = 0
  bool monotone = false;  ///< no increment below -(3 se + tolerance)
  bool flat = false;      ///< every |from_start| <= 3 se + tolerance
};

/// Estimates E[C~_t] at t = 0 and each checkpoint, where
///   C~_t = int_0^t x dY + int_0^t (xdot^2 + nu^2 x^2) + c(t) x_t^2 + x_t H_t + G_t,
///   c(t) = nu coth(nu (T-t)) (1/(T-t) when nu = 0),
/// and G_t = -1/4 E[int_t^T H^2 | F_t] is replaced by its pathwise integrand,
/// which has the same expectation. Checkpoints must lie strictly inside (0, T).
SubmartingaleReport submartingale_check(const StrategyRule& rule, const Model& model,
                                        const ReducedObjective& objective, double position,
                                        const TimeGrid& grid,
                                        std::span<const double> checkpoints, const McConfig& mc,
                                        CheckTolerance tolerance = {});

}  // namespace acx
