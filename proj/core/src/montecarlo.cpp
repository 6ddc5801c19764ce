#include "acx/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "acx/errors.hpp"

namespace acx {
namespace {

struct KindName {
  StrategyKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {StrategyKind::Vwap, "vwap"},
    {StrategyKind::MeanVariance, "mean_variance"},
    {StrategyKind::GsMartingale, "gs_martingale"},
    {StrategyKind::GsMartingaleNu0, "gs_martingale_nu0"},
    {StrategyKind::GsSemimartingale, "gs_semimartingale"},
    {StrategyKind::GsSemimartingaleNu0, "gs_semimartingale_nu0"},
    {StrategyKind::ExpectedCost, "expected_cost"},
    {StrategyKind::Optimal, "optimal"},
    {StrategyKind::Fixed, "fixed"},
};

StrategyKind resolve(StrategyKind kind, const ReducedObjective& objective, const Model& model) {
  if (kind != StrategyKind::Optimal) return kind;
  const bool positive_nu = objective.nu > 0.0;
  if (model.is_martingale()) {
    return positive_nu ? StrategyKind::GsMartingale : StrategyKind::GsMartingaleNu0;
  }
  return positive_nu ? StrategyKind::GsSemimartingale : StrategyKind::GsSemimartingaleNu0;
}

std::optional<double> closed_form_for(Functional functional, const ValueReport& value,
                                      const ImpactParams& params, double position, double s0) {
  switch (functional) {
    case Functional::Reduced:
    case Functional::MartingaleObjective:
      return value.closed_form;
    case Functional::RiskInclusive:
      return 0.5 * params.gamma() * position * position - position * s0 +
             params.eta() * value.closed_form;
    case Functional::RealizedCost:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

StrategyRule StrategyRule::of(StrategyKind kind, std::string label) {
  StrategyRule rule;
  rule.kind = kind;
  rule.label = label.empty() ? to_string(kind) : std::move(label);
  return rule;
}

StrategyRule StrategyRule::mean_variance(double alpha, double sigma, std::string label) {
  auto rule = of(StrategyKind::MeanVariance, std::move(label));
  rule.alpha = alpha;
  rule.sigma = sigma;
  return rule;
}

StrategyRule StrategyRule::fixed_trajectory(ExecutionTrajectory trajectory, std::string label) {
  auto rule = of(StrategyKind::Fixed, std::move(label));
  rule.fixed = std::make_shared<const ExecutionTrajectory>(std::move(trajectory));
  return rule;
}

StrategyKind parse_strategy_kind(const std::string& name) {
  for (const auto& entry : kKindNames) {
    if (name == entry.name && entry.kind != StrategyKind::Fixed) return entry.kind;
  }
  throw InvalidArgument("unknown strategy '" + name + "'");
}

std::string to_string(StrategyKind kind) {
  for (const auto& entry : kKindNames) {
    if (entry.kind == kind) return entry.name;
  }
  return "unknown";
}

BoundStrategy::BoundStrategy(const StrategyRule& rule, double position, const TimeGrid& grid,
                             const ReducedObjective& objective, const Model& model)
    : rule_(rule),
      resolved_(resolve(rule.kind, objective, model)),
      position_(position),
      grid_(grid),
      objective_(objective) {
  switch (resolved_) {
    case StrategyKind::Vwap:
      precomputed_ = vwap(position, grid);
      break;
    case StrategyKind::MeanVariance:
      precomputed_ = mean_variance(position, grid, rule.alpha, rule.sigma, objective.eta);
      break;
    case StrategyKind::Fixed:
      if (!rule.fixed) throw InvalidArgument("fixed strategy without a trajectory");
      if (!(rule.fixed->grid == grid)) throw GridMismatch("fixed trajectory is on another grid");
      precomputed_ = *rule.fixed;
      break;
    case StrategyKind::GsMartingale:
      if (!(objective.nu > 0.0)) throw InvalidArgument("gs_martingale: requires nu > 0");
      break;
    case StrategyKind::GsMartingaleNu0:
      if (objective.nu != 0.0) throw InvalidArgument("gs_martingale_nu0: requires nu = 0");
      break;
    case StrategyKind::GsSemimartingale:
      if (!(objective.nu > 0.0)) throw InvalidArgument("gs_semimartingale: requires nu > 0");
      semimartingale_.emplace(position, grid, objective, model);
      break;
    case StrategyKind::GsSemimartingaleNu0:
      if (objective.nu != 0.0) throw InvalidArgument("gs_semimartingale_nu0: requires nu = 0");
      semimartingale_.emplace(position, grid, objective, model);
      break;
    case StrategyKind::ExpectedCost:
      semimartingale_.emplace(position, grid, ReducedObjective{objective.eta, 0.0, 0.0}, model);
      break;
    case StrategyKind::Optimal:
      break;
  }
}

ExecutionTrajectory BoundStrategy::operator()(const PricePath& path) const {
  if (precomputed_) return *precomputed_;
  if (semimartingale_) return (*semimartingale_)(path);
  if (resolved_ == StrategyKind::GsMartingale) {
    return gs_martingale(position_, grid_, objective_, path);
  }
  return gs_martingale_nu0(position_, grid_, objective_, path);
}

Functional parse_functional(const std::string& name) {
  if (name == "realized") return Functional::RealizedCost;
  if (name == "risk_inclusive") return Functional::RiskInclusive;
  if (name == "reduced") return Functional::Reduced;
  if (name == "martingale_objective") return Functional::MartingaleObjective;
  throw InvalidArgument("unknown functional '" + name + "'");
}

std::string to_string(Functional functional) {
  switch (functional) {
    case Functional::RealizedCost:
      return "realized";
    case Functional::RiskInclusive:
      return "risk_inclusive";
    case Functional::Reduced:
      return "reduced";
    case Functional::MartingaleObjective:
      return "martingale_objective";
  }
  return "unknown";
}

double evaluate_functional(Functional functional, const ExecutionTrajectory& trajectory,
                           const PricePath& path, const ImpactParams& params) {
  switch (functional) {
    case Functional::RealizedCost:
      return realized_cost(trajectory, path, params, false).total;
    case Functional::RiskInclusive:
      return realized_cost(trajectory, path, params, true).total;
    case Functional::Reduced:
      return reduced_functional(trajectory, path, params.reduced());
    case Functional::MartingaleObjective:
      return reduced_functional_terms(trajectory, path, params.reduced()).martingale_objective();
  }
  return 0.0;
}

MCEstimate estimate(const StrategyRule& rule, const Model& model, const ImpactParams& params,
                    double position, const TimeGrid& grid, Functional functional,
                    const McConfig& mc) {
  if (mc.n_paths < 2) throw InvalidArgument("estimate: n_paths must be >= 2");
  const BoundStrategy strategy(rule, position, grid, params.reduced(), model);
  const auto samples = parallel_map(mc.n_paths, mc.threads, [&](std::size_t i) {
    const auto path = model.simulate(grid, mc.seed, i);
    return evaluate_functional(functional, strategy(path), path, params);
  });
  return summarize(samples, mc.seed);
}

CompareTable compare(std::span<const StrategyRule> rules, const Model& model,
                     const ImpactParams& params, double position, const TimeGrid& grid,
                     Functional functional, const McConfig& mc) {
  if (rules.size() < 2) throw InvalidArgument("compare: need at least two strategies");
  if (mc.n_paths < 2) throw InvalidArgument("compare: n_paths must be >= 2");
  std::vector<BoundStrategy> bound;
  bound.reserve(rules.size());
  for (const auto& rule : rules) bound.emplace_back(rule, position, grid, params.reduced(), model);

  const auto per_path = parallel_map(mc.n_paths, mc.threads, [&](std::size_t i) {
    const auto path = model.simulate(grid, mc.seed, i);
    std::vector<double> values(bound.size());
    for (std::size_t r = 0; r < bound.size(); ++r) {
      values[r] = evaluate_functional(functional, bound[r](path), path, params);
    }
    return values;
  });

  const std::size_t m = rules.size();
  std::vector<std::vector<double>> columns(m, std::vector<double>(mc.n_paths));
  for (std::size_t i = 0; i < mc.n_paths; ++i) {
    for (std::size_t r = 0; r < m; ++r) columns[r][i] = per_path[i][r];
  }

  CompareTable table;
  table.rows.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    table.rows[r].label = rules[r].label.empty() ? to_string(rules[r].kind) : rules[r].label;
    table.rows[r].estimate = summarize(columns[r], mc.seed);
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return table.rows[a].estimate.mean < table.rows[b].estimate.mean;
  });
  for (std::size_t pos = 0; pos < m; ++pos) table.rows[order[pos]].rank = pos;
  table.best = order.front();

  const auto& best = columns[table.best];
  std::vector<double> diff(mc.n_paths);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < mc.n_paths; ++i) diff[i] = columns[r][i] - best[i];
    table.rows[r].difference = summarize(diff, mc.seed);
    const double a = table.rows[r].estimate.std_error;
    const double b = table.rows[table.best].estimate.std_error;
    table.rows[r].unpaired_std_error = std::sqrt(a * a + b * b);
  }
  return table;
}

SweepResult robustness_sweep(const StrategyRule& rule, std::span<const Model> models,
                             const ImpactParams& params, double position, const TimeGrid& grid,
                             const McConfig& mc, Functional functional) {
  if (models.empty()) throw InvalidArgument("robustness_sweep: no models");
  for (const auto& model : models) {
    if (!model.is_martingale()) {
      throw InvalidArgument("robustness_sweep: law '" + std::string(model.kind()) +
                            "' is not a martingale");
    }
  }
  SweepResult result;
  const auto objective = params.reduced();
  for (const auto& model : models) {
    SweepEntry entry;
    entry.model = std::string(model.kind());
    entry.estimate = estimate(rule, model, params, position, grid, functional, mc);

    ValueOptions options;
    options.n_steps = grid.steps();
    if (!model.has_second_moment()) options.mc = mc;
    const auto value = objective.nu > 0.0
                           ? value_martingale(position, grid.horizon(), objective, model, options)
                           : value_martingale_nu0(position, grid.horizon(), objective, model, options);
    entry.closed_form =
        closed_form_for(functional, value, params, position, model.initial_price());
    if (entry.closed_form) {
      entry.closed_form_std_error = value.closed_form_std_error *
                                    (functional == Functional::RiskInclusive ? params.eta() : 1.0);
      entry.excess = entry.estimate.mean - *entry.closed_form;
      entry.excess_std_error =
          std::hypot(entry.estimate.std_error, entry.closed_form_std_error);
    }
    result.entries.push_back(std::move(entry));
  }
  for (std::size_t i = 1; i < result.entries.size(); ++i) {
    if (result.entries[i].estimate.mean > result.entries[result.worst].estimate.mean) {
      result.worst = i;
    }
  }
  result.worst_case = result.entries[result.worst].estimate.mean;
  return result;
}

}  // namespace acx
