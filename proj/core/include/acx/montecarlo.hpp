#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acx/costs.hpp"
#include "acx/impact_params.hpp"
#include "acx/model.hpp"
#include "acx/statistics.hpp"
#include "acx/strategies.hpp"

namespace acx {

enum class StrategyKind {
  Vwap,
  MeanVariance,
  GsMartingale,
  GsMartingaleNu0,
  GsSemimartingale,
  GsSemimartingaleNu0,
  ExpectedCost,
  Optimal,  ///< the optimal rule for the given nu and law
  Fixed,    ///< a precomputed trajectory, ignoring the path
};

/// A strategy as a map path -> trajectory.
struct StrategyRule {
  StrategyKind kind = StrategyKind::Optimal;
  std::string label;
  double alpha = 0.0;  ///< mean-variance risk aversion
  double sigma = 0.0;  ///< mean-variance volatility
  std::shared_ptr<const ExecutionTrajectory> fixed;

  static StrategyRule of(StrategyKind kind, std::string label = {});
  static StrategyRule mean_variance(double alpha, double sigma, std::string label = {});
  static StrategyRule fixed_trajectory(ExecutionTrajectory trajectory, std::string label = {});
};

/// Parses "vwap", "mean_variance", "gs_martingale", "gs_martingale_nu0",
/// "gs_semimartingale", "gs_semimartingale_nu0", "expected_cost", "optimal".
StrategyKind parse_strategy_kind(const std::string& name);
std::string to_string(StrategyKind kind);

/// A rule bound to one problem instance; kernel tables are built once here.
class BoundStrategy {
 public:
  BoundStrategy(const StrategyRule& rule, double position, const TimeGrid& grid,
                const ReducedObjective& objective, const Model& model);

  ExecutionTrajectory operator()(const PricePath& path) const;

 private:
  StrategyRule rule_;
  StrategyKind resolved_;
  double position_;
  TimeGrid grid_;
  ReducedObjective objective_;
  std::optional<SemimartingaleRule> semimartingale_;
  std::optional<ExecutionTrajectory> precomputed_;
};

/// Per-path quantity averaged by the estimators.
enum class Functional {
  RealizedCost,         ///< C(x)
  RiskInclusive,        ///< C(x) + lambda_tilde int x (S + gamma x) dt
  Reduced,              ///< int x dY + int (xdot^2 + nu^2 x^2) dt
  MartingaleObjective,  ///< int (xdot^2 + lambda S x + nu^2 x^2) dt
};

Functional parse_functional(const std::string& name);
std::string to_string(Functional functional);

double evaluate_functional(Functional functional, const ExecutionTrajectory& trajectory,
                           const PricePath& path, const ImpactParams& params);

/// Mean of `functional` over n_paths simulated paths; path i uses substream i.
MCEstimate estimate(const StrategyRule& rule, const Model& model, const ImpactParams& params,
                    double position, const TimeGrid& grid, Functional functional,
                    const McConfig& mc);

struct CompareRow {
  std::string label;
  MCEstimate estimate;
  std::size_t rank = 0;  ///< 0 = lowest mean
  /// Paired difference (this rule - best rule) on common paths.
  MCEstimate difference;
  /// Standard error of the same difference if the two samples were independent.
  double unpaired_std_error = 0.0;
};

struct CompareTable {
  std::vector<CompareRow> rows;  ///< input order
  std::size_t best = 0;
};

/// Evaluates every rule on the same simulated paths. Needs at least two rules.
CompareTable compare(std::span<const StrategyRule> rules, const Model& model,
                     const ImpactParams& params, double position, const TimeGrid& grid,
                     Functional functional, const McConfig& mc);

struct SweepEntry {
  std::string model;
  MCEstimate estimate;
  std::optional<double> closed_form;
  double closed_form_std_error = 0.0;
  double excess = 0.0;  ///< estimate - closed form (0 without a closed form)
  double excess_std_error = 0.0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  std::size_t worst = 0;  ///< index of the largest estimated mean
  double worst_case = 0.0;
};

/// One fixed rule under each martingale law, against each law's optimal value.
/// Throws InvalidArgument if any law is not a martingale.
SweepResult robustness_sweep(const StrategyRule& rule, std::span<const Model> models,
                             const ImpactParams& params, double position, const TimeGrid& grid,
                             const McConfig& mc,
                             Functional functional = Functional::MartingaleObjective);

}  // namespace acx
