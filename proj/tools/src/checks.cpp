#include "acx_cli/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "acx/costs.hpp"
#include "acx/errors.hpp"
#include "acx/io.hpp"
#include "acx/oracle.hpp"
#include "acx/rng.hpp"

namespace acx::cli {
namespace {

using nlohmann::json;

double scale_of(double position) { return std::max(std::abs(position), 1e-300); }

double sup_distance(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

json estimate_json(const MCEstimate& e) { return to_json(e); }

CheckOutcome tree_dp_check(const ExperimentConfig& cfg) {
  const auto& v = cfg.verify;
  const ReducedObjective objective = cfg.impact;
  const GbmMartingale gbm{cfg.models.front().initial_price(), v.tree_sigma};
  struct Errors {
    double sampled, reference;
  };
  auto error_at = [&](std::size_t steps) {
    const auto tree = fit_binomial(gbm, steps, cfg.horizon);
    const auto dp = tree_dp(tree, cfg.horizon, objective);
    const SemimartingaleRule closed(cfg.position, dp.grid, objective, Model(tree));
    auto gap = [&](const std::vector<std::size_t>& ups) {
      return sup_distance(dp.follow(cfg.position, ups).holdings, closed(dp.path(ups)).holdings) /
             scale_of(cfg.position);
    };
    Errors e{0.0, 0.0};
    for (std::size_t p = 0; p < v.tree_paths; ++p) {
      e.sampled = std::max(e.sampled, gap(sample_tree_nodes(tree, cfg.mc.seed, p)));
    }
    for (const auto& ups : reference_tree_paths(tree, v.tree_sigma * std::sqrt(cfg.horizon))) {
      e.reference = std::max(e.reference, gap(ups));
    }
    return e;
  };
  const Errors coarse = error_at(v.tree_steps);
  const Errors fine = error_at(2 * v.tree_steps);
  const double ratio = fine.reference > 0.0 ? coarse.reference / fine.reference : INFINITY;
  const bool first_order = fine.reference == 0.0 || (ratio >= 1.6 && ratio <= 2.4);
  const bool pass = coarse.sampled <= v.tree_tolerance && first_order;
  return {"tree_dp", pass,
          {{"steps", v.tree_steps},
           {"relative_error", coarse.sampled},
           {"reference_error", coarse.reference},
           {"reference_error_doubled", fine.reference},
           {"ratio", fine.reference > 0.0 ? json(ratio) : json(nullptr)},
           {"tolerance", v.tree_tolerance}}};
}

CheckOutcome euler_lagrange_check(const ExperimentConfig& cfg) {
  const auto& v = cfg.verify;
  const auto grid = TimeGrid::uniform(cfg.horizon, cfg.n_steps);
  const double X = cfg.position;
  const double T = cfg.horizon;
  const double nu = cfg.impact.nu();
  const double s0 = cfg.models.front().initial_price();

  const auto flat = ReducedObjective::make(cfg.impact.eta(), 0.0, nu);
  const std::vector<double> mean0(grid.size(), s0);
  const auto x = euler_lagrange_deterministic(X, grid, flat, mean0);
  std::vector<double> exact(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double r = grid.remaining(k);
    exact[k] = nu > 0.0 ? X * std::sinh(nu * r) / std::sinh(nu * T) : X * r / T;
  }
  const double risk_error = sup_distance(x.holdings, exact) / scale_of(X);

  const double b = v.drift;
  const double eta = cfg.impact.eta();
  const auto drift_objective = ReducedObjective::make(eta, 0.0, 0.0);
  std::vector<double> mean(grid.size()), rate(grid.size(), b);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    mean[k] = s0 + b * t;
    exact[k] = X * (T - t) / T + b * t * (T - t) / (4.0 * eta);
  }
  const auto drift_el = euler_lagrange_deterministic(X, grid, drift_objective, mean, rate);
  const double drift_error = sup_distance(drift_el.holdings, exact) / scale_of(X);
  const Model deterministic(Bachelier{s0, 0.0, b});
  const auto minimizer = expected_cost_minimizer(X, grid, eta, deterministic,
                                                 deterministic.simulate(grid, cfg.mc.seed));
  const double corollary_error = sup_distance(minimizer.holdings, exact) / scale_of(X);

  const bool pass = risk_error <= v.el_tolerance && drift_error <= v.el_tolerance &&
                    corollary_error <= v.el_tolerance;
  return {"euler_lagrange", pass,
          {{"risk_case_error", risk_error},
           {"drift_case_error", drift_error},
           {"expected_cost_minimizer_error", corollary_error},
           {"residual", euler_lagrange_residual(x, flat, mean0)},
           {"tolerance", v.el_tolerance}}};
}

ValueReport closed_value(const ExperimentConfig& cfg, const Model& model, const TimeGrid& grid) {
  const ReducedObjective objective = cfg.impact;
  if (!model.is_martingale()) return value_semimartingale(cfg.position, grid, objective, model, cfg.mc);
  ValueOptions options;
  options.n_steps = cfg.n_steps;
  if (!model.has_second_moment()) options.mc = cfg.mc;
  return objective.nu > 0.0 ? value_martingale(cfg.position, cfg.horizon, objective, model, options)
                            : value_martingale_nu0(cfg.position, cfg.horizon, objective, model, options);
}

CheckOutcome value_check(const ExperimentConfig& cfg) {
  const auto& v = cfg.verify;
  const auto grid = TimeGrid::uniform(cfg.horizon, cfg.n_steps);
  const auto& model = cfg.models.front();
  const auto value = closed_value(cfg, model, grid);
  const auto e = estimate(v.strategy, model, cfg.impact, cfg.position, grid, Functional::Reduced, cfg.mc);
  const double se = std::hypot(e.std_error, value.closed_form_std_error);
  const double gap = e.mean - value.closed_form;
  const bool pass = std::abs(gap) <= v.sweep_sigmas * se + v.absolute;
  return {"value", pass,
          {{"model", std::string(model.kind())},
           {"strategy", v.strategy.label},
           {"closed_form", value.closed_form},
           {"closed_form_stderr", value.closed_form_std_error},
           {"estimate", estimate_json(e)},
           {"difference", gap},
           {"z", se > 0.0 ? json(gap / se) : json(nullptr)}}};
}

CheckOutcome sweep_check(const ExperimentConfig& cfg) {
  const auto& v = cfg.verify;
  const auto grid = TimeGrid::uniform(cfg.horizon, cfg.n_steps);
  const auto sweep = robustness_sweep(v.strategy, cfg.models, cfg.impact, cfg.position, grid, cfg.mc);
  bool pass = true;
  for (const auto& entry : sweep.entries) {
    pass = pass && std::abs(entry.excess) <= v.sweep_sigmas * entry.excess_std_error + v.absolute;
  }
  auto details = to_json(sweep);
  details["strategy"] = v.strategy.label;
  return {"sweep", pass, details};
}

CheckOutcome perturbation(const ExperimentConfig& cfg) {
  const auto& v = cfg.verify;
  const auto grid = TimeGrid::uniform(cfg.horizon, cfg.n_steps);
  const ReducedObjective objective = cfg.impact;
  const auto& model = cfg.models.front();
  auto directions = random_directions(grid, v.n_directions, cfg.mc.seed);
  bool aligned = false;
  if (objective.lambda > 0.0 && cfg.position != 0.0) {
    try {
      directions.push_back(aligned_direction(cfg.position, grid, objective, model));
      aligned = true;
    } catch (const InvalidArgument&) {
      // optimal rule coincides with VWAP on the frozen path; nothing to add
    }
  }
  const auto report = perturbation_check(v.strategy, model, objective, cfg.position, grid, cfg.mc,
                                         directions, v.delta, {v.sigmas, v.absolute});
  json rows = json::array();
  for (const auto& d : report.directions) {
    rows.push_back({{"slope", estimate_json(d.slope)},
                    {"gap_plus", estimate_json(d.gap_plus)},
                    {"gap_minus", estimate_json(d.gap_minus)},
                    {"curvature", d.curvature},
                    {"stationary", d.stationary},
                    {"convex", d.convex}});
  }
  return {"perturbation", report.all_stationary && report.all_convex,
          {{"strategy", v.strategy.label},
           {"delta", report.delta},
           {"aligned_direction_included", aligned},
           {"descent_found", report.descent_found},
           {"directions", rows}}};
}

CheckOutcome submartingale(const ExperimentConfig& cfg) {
  const auto& v = cfg.verify;
  const auto grid = TimeGrid::uniform(cfg.horizon, cfg.n_steps);
  std::vector<double> times;
  for (double f : v.checkpoints) times.push_back(f * cfg.horizon);
  const auto report = submartingale_check(v.strategy, cfg.models.front(), cfg.impact, cfg.position,
                                          grid, times, cfg.mc, {v.sigmas, v.absolute});
  json rows = json::array();
  for (const auto& c : report.checkpoints) {
    rows.push_back({{"time", c.time},
                    {"node", c.node},
                    {"value", estimate_json(c.value)},
                    {"increment", estimate_json(c.increment)},
                    {"from_start", estimate_json(c.from_start)}});
  }
  return {"submartingale", report.monotone && report.flat,
          {{"strategy", v.strategy.label},
           {"monotone", report.monotone},
           {"flat", report.flat},
           {"checkpoints", rows}}};
}

CheckOutcome nu_limit(const ExperimentConfig& cfg) {
  const auto& v = cfg.verify;
  const auto grid = TimeGrid::uniform(cfg.horizon, cfg.n_steps);
  const auto& model = cfg.models.front();
  const auto path = model.simulate(grid, cfg.mc.seed);
  const double lambda = cfg.impact.lambda();
  const auto small = gs_semimartingale(cfg.position, grid,
                                       ReducedObjective::make(cfg.impact.eta(), lambda, v.nu_small),
                                       model, path);
  const auto zero = gs_semimartingale_nu0(cfg.position, grid,
                                          ReducedObjective::make(cfg.impact.eta(), lambda, 0.0),
                                          model, path);
  const double distance = sup_distance(small.holdings, zero.holdings) / scale_of(cfg.position);
  return {"nu_limit", distance <= v.nu_tolerance,
          {{"nu", v.nu_small}, {"relative_distance", distance}, {"tolerance", v.nu_tolerance}}};
}

bool jensen_holds(const ExecutionTrajectory& x) {
  const auto& grid = x.grid;
  double tail = 0.0;  // sum_{j >= k} v_j^2 dt_j
  for (std::size_t k = grid.steps(); k-- > 0;) {
    tail += x.rates[k] * x.rates[k] * grid.dt(k);
    const double bound = grid.remaining(k) * tail;
    if (x[k] * x[k] > bound * (1.0 + 1e-12) + 1e-300) return false;
  }
  return true;
}

CheckOutcome invariants(const ExperimentConfig& cfg) {
  const auto& v = cfg.verify;
  const auto grid = TimeGrid::uniform(cfg.horizon, cfg.n_steps);
  const ReducedObjective objective = cfg.impact;
  const auto& model = cfg.models.front();
  const double s0 = model.initial_price();
  const auto martingale_kind =
      objective.nu > 0.0 ? StrategyKind::GsMartingale : StrategyKind::GsMartingaleNu0;
  const BoundStrategy tested(v.strategy, cfg.position, grid, objective, model);
  const BoundStrategy low_vol(StrategyRule::of(martingale_kind), cfg.position, grid, objective,
                              Model(GbmMartingale{s0, 0.1}));
  const BoundStrategy high_vol(StrategyRule::of(martingale_kind), cfg.position, grid, objective,
                               Model(GbmMartingale{s0, 0.9}));

  std::size_t fuel = 0, volatility = 0, monotone = 0, jensen = 0;
  const auto flags = parallel_map(v.trials, cfg.mc.threads, [&](std::size_t i) {
    const auto path = model.simulate(grid, cfg.mc.seed, i);
    const auto x = tested(path);
    const auto a = low_vol(path);
    const auto b = high_vol(path);
    // Raise the path by a nonnegative random bump.
    PricePath higher = path;
    PathRng rng(cfg.mc.seed ^ 0x5bd1e995ULL, i);
    for (std::size_t k = 1; k < higher.size(); ++k) {
      higher.values[k] += std::abs(rng.normal()) * (1.0 + std::abs(path[k]));
    }
    const auto up = low_vol(higher);
    bool dominated = true;
    for (std::size_t k = 0; k < grid.size(); ++k) dominated = dominated && up[k] <= a[k];
    return std::array<bool, 4>{x[0] == cfg.position && x.holdings.back() == 0.0,
                               a.holdings == b.holdings, dominated,
                               jensen_holds(x) && jensen_holds(a)};
  });
  for (const auto& f : flags) {
    fuel += f[0];
    volatility += f[1];
    monotone += f[2];
    jensen += f[3];
  }
  const std::size_t n = v.trials;
  return {"invariants", fuel == n && volatility == n && monotone == n && jensen == n,
          {{"trials", n},
           {"fuel_constraint", fuel},
           {"volatility_independence", volatility},
           {"aggressive_in_the_money", monotone},
           {"jensen_bound", jensen}}};
}

}  // namespace

CheckOutcome run_check(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "tree_dp") return tree_dp_check(cfg);
  if (name == "euler_lagrange") return euler_lagrange_check(cfg);
  if (name == "value") return value_check(cfg);
  if (name == "sweep") return sweep_check(cfg);
  if (name == "perturbation") return perturbation(cfg);
  if (name == "submartingale") return submartingale(cfg);
  if (name == "nu_limit") return nu_limit(cfg);
  if (name == "invariants") return invariants(cfg);
  throw ConfigError("verify.checks: unknown check '" + name + "'");
}

}  // namespace acx::cli
