#include "acx/costs.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "acx/errors.hpp"
#include "acx/kernel.hpp"
#include "acx/quadrature.hpp"

namespace acx {
namespace {

void check_shared_grid(const ExecutionTrajectory& trajectory, const PricePath& path) {
  if (!(trajectory.grid == path.grid) || path.values.size() != trajectory.holdings.size()) {
    throw GridMismatch("trajectory and price path are on different grids");
  }
}

// int_{t_k}^{t_{k+1}} x^2 dt for x linear on the cell.
double cell_square_integral(double a, double b, double dt) {
  return (a * a + a * b + b * b) / 3.0 * dt;
}

struct CellTerms {
  double price;      // x_k (S_{k+1} - S_k)
  double product;    // trapezoid of x S
  double kinetic;    // v^2 dt
  double potential;  // int x^2
};

CellTerms cell_terms(const ExecutionTrajectory& x, const PricePath& s, std::size_t k) {
  const double dt = x.grid.dt(k);
  const double a = x.holdings[k];
  const double b = x.holdings[k + 1];
  const double v = x.rates[k];
  return CellTerms{a * (s[k + 1] - s[k]), 0.5 * (a * s[k] + b * s[k + 1]) * dt, v * v * dt,
                   cell_square_integral(a, b, dt)};
}

void require_martingale(const Model& model, const char* name) {
  if (!model.is_martingale()) {
    throw InvalidArgument(std::string(name) + ": law is not a martingale; use value_semimartingale");
  }
}

// -lambda^2 c int_0^T E[S_t^2] w(t) dt, estimated by simulation when the law has
// no closed-form second moment.
template <class W>
std::pair<double, double> quadratic_remainder(const Model& model, double horizon, double scale,
                                              W&& weight, const ValueOptions& options) {
  if (model.has_second_moment()) {
    const double integral = simpson([&](double t) { return model.second_moment(t) * weight(t); },
                                    0.0, horizon, options.quadrature_intervals);
    return {-scale * integral, 0.0};
  }
  if (!options.mc) {
    throw CapabilityError("no closed-form second moment for '" + std::string(model.kind()) +
                          "'; a Monte Carlo configuration is required");
  }
  const auto grid = TimeGrid::uniform(horizon, options.n_steps);
  const auto samples = parallel_map(options.mc->n_paths, options.mc->threads, [&](std::size_t i) {
    const auto path = model.simulate(grid, options.mc->seed, i);
    double acc = 0.0;
    for (std::size_t k = 0; k < grid.steps(); ++k) {
      const double a = path[k] * path[k] * weight(grid[k]);
      const double b = path[k + 1] * path[k + 1] * weight(grid[k + 1]);
      acc += 0.5 * (a + b) * grid.dt(k);
    }
    return acc;
  });
  const auto est = summarize(samples, options.mc->seed);
  return {-scale * est.mean, scale * est.std_error};
}

template <class Strategy>
MCEstimate simulate_optimal_cost(const Model& model, const TimeGrid& grid,
                                 const ReducedObjective& objective, const McConfig& mc,
                                 Strategy&& strategy) {
  const auto samples = parallel_map(mc.n_paths, mc.threads, [&](std::size_t i) {
    const auto path = model.simulate(grid, mc.seed, i);
    return reduced_functional(strategy(path), path, objective);
  });
  return summarize(samples, mc.seed);
}

}  // namespace

CostBreakdown realized_cost(const ExecutionTrajectory& trajectory, const PricePath& path,
                            const ImpactParams& params, bool include_risk) {
  check_shared_grid(trajectory, path);
  CostBreakdown out;
  const double position = trajectory.initial_position;
  double price = 0.0;
  double kinetic = 0.0;
  double product = 0.0;
  double squares = 0.0;
  for (std::size_t k = 0; k < trajectory.grid.steps(); ++k) {
    const auto c = cell_terms(trajectory, path, k);
    price += c.price;
    kinetic += c.kinetic;
    product += c.product;
    squares += c.potential;
  }
  out.price_term = -price;
  out.temporary = params.eta() * kinetic;
  out.permanent = 0.5 * params.gamma() * position * position;
  out.cash_anchor = -position * path[0];
  out.includes_risk = include_risk;
  if (include_risk) out.risk_term = params.lambda_tilde() * (product + params.gamma() * squares);
  out.total = out.cash_anchor + out.price_term + out.temporary + out.permanent + out.risk_term;
  return out;
}

ReducedCost reduced_functional_terms(const ExecutionTrajectory& trajectory, const PricePath& path,
                                     const ReducedObjective& objective) {
  check_shared_grid(trajectory, path);
  ReducedCost out;
  for (std::size_t k = 0; k < trajectory.grid.steps(); ++k) {
    const auto c = cell_terms(trajectory, path, k);
    out.price_noise += c.price;
    out.risk += c.product;
    out.kinetic += c.kinetic;
    out.potential += c.potential;
  }
  out.price_noise *= -1.0 / objective.eta;
  out.risk *= objective.lambda;
  out.potential *= objective.nu * objective.nu;
  return out;
}

double reduced_functional(const ExecutionTrajectory& trajectory, const PricePath& path,
                          const ReducedObjective& objective) {
  return reduced_functional_terms(trajectory, path, objective).total();
}

std::vector<double> running_reduced_functional(const ExecutionTrajectory& trajectory,
                                               const PricePath& path,
                                               const ReducedObjective& objective) {
  check_shared_grid(trajectory, path);
  const double nu2 = objective.nu * objective.nu;
  std::vector<double> out(trajectory.holdings.size(), 0.0);
  for (std::size_t k = 0; k < trajectory.grid.steps(); ++k) {
    const auto c = cell_terms(trajectory, path, k);
    out[k + 1] = out[k] - c.price / objective.eta + objective.lambda * c.product + c.kinetic +
                 nu2 * c.potential;
  }
  return out;
}

ValueReport value_martingale(double position, double horizon, const ReducedObjective& objective,
                             const Model& model, const ValueOptions& options) {
  require_martingale(model, "value_martingale");
  if (!(objective.nu > 0.0)) throw InvalidArgument("value_martingale: requires nu > 0");
  if (!(horizon > 0.0)) throw InvalidArgument("value_martingale: horizon must be positive");
  const double nu = objective.nu;
  const double lambda = objective.lambda;
  ValueReport report;
  report.components.leading = nu * position * position / std::tanh(nu * horizon);
  report.components.linear =
      lambda * position * model.initial_price() / nu * std::tanh(0.5 * nu * horizon);
  const auto [quadratic, quadratic_se] = quadratic_remainder(
      model, horizon, lambda * lambda / (4.0 * nu * nu),
      [&](double t) {
        const double th = std::tanh(0.5 * nu * (horizon - t));
        return th * th;
      },
      options);
  report.components.quadratic = quadratic;
  report.closed_form_std_error = quadratic_se;
  report.closed_form = report.components.sum();
  if (options.mc) {
    const auto grid = TimeGrid::uniform(horizon, options.n_steps);
    report.mc = simulate_optimal_cost(model, grid, objective, *options.mc, [&](const PricePath& p) {
      return gs_martingale(position, grid, objective, p);
    });
  }
  return report;
}

ValueReport value_martingale_nu0(double position, double horizon,
                                 const ReducedObjective& objective, const Model& model,
                                 const ValueOptions& options) {
  require_martingale(model, "value_martingale_nu0");
  if (objective.nu != 0.0) throw InvalidArgument("value_martingale_nu0: requires nu = 0");
  if (!(horizon > 0.0)) throw InvalidArgument("value_martingale_nu0: horizon must be positive");
  const double lambda = objective.lambda;
  ValueReport report;
  report.components.leading = position * position / horizon;
  report.components.linear = 0.5 * lambda * position * model.initial_price() * horizon;
  const auto [quadratic, quadratic_se] = quadratic_remainder(
      model, horizon, lambda * lambda / 16.0,
      [&](double t) { return (horizon - t) * (horizon - t); }, options);
  report.components.quadratic = quadratic;
  report.closed_form_std_error = quadratic_se;
  report.closed_form = report.components.sum();
  if (options.mc) {
    const auto grid = TimeGrid::uniform(horizon, options.n_steps);
    report.mc = simulate_optimal_cost(model, grid, objective, *options.mc, [&](const PricePath& p) {
      return gs_martingale_nu0(position, grid, objective, p);
    });
  }
  return report;
}

ValueReport value_semimartingale(double position, const TimeGrid& grid,
                                 const ReducedObjective& objective, const Model& model,
                                 const McConfig& mc) {
  const SemimartingaleRule rule(position, grid, objective, model);
  const double horizon = grid.horizon();
  const double nu = objective.nu;
  ValueReport report;
  const double k0 = rule.kernel()(0, model.initial_price());
  if (nu > 0.0) {
    report.components.leading = nu * position * position / std::tanh(nu * horizon);
    report.components.linear = position / std::sinh(nu * horizon) * k0;
  } else {
    report.components.leading = position * position / horizon;
    report.components.linear = position / horizon * k0;
  }

  struct PathSample {
    double h_squared;
    double cost;
  };
  const auto samples = parallel_map(mc.n_paths, mc.threads, [&](std::size_t i) {
    const auto path = model.simulate(grid, mc.seed, i);
    double acc = 0.0;
    double prev = rule.h(0, path[0]);
    for (std::size_t k = 0; k < grid.steps(); ++k) {
      const double next = rule.h(k + 1, path[k + 1]);
      acc += 0.5 * (prev * prev + next * next) * grid.dt(k);
      prev = next;
    }
    return PathSample{acc, reduced_functional(rule(path), path, objective)};
  });
  std::vector<double> h2(samples.size());
  std::vector<double> cost(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    h2[i] = samples[i].h_squared;
    cost[i] = samples[i].cost;
  }
  const auto h2_est = summarize(h2, mc.seed);
  report.components.quadratic = -0.25 * h2_est.mean;
  report.closed_form_std_error = 0.25 * h2_est.std_error;
  report.closed_form = report.components.sum();
  report.mc = summarize(cost, mc.seed);
  return report;
}

}  // namespace acx
