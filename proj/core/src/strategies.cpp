#include "acx/strategies.hpp"

#include <cmath>
#include <string>

#include "acx/errors.hpp"
#include "acx/kernel.hpp"

namespace acx {
namespace {

void check_path(const TimeGrid& grid, const PricePath& path) {
  if (!(path.grid == grid) || path.values.size() != grid.size()) {
    throw GridMismatch("price path is not defined on the trajectory grid");
  }
}

void check_position(double position) {
  if (!std::isfinite(position)) throw InvalidArgument("initial position must be finite");
}

// Running trapezoid integrals I_k = int_0^{t_k} f, for k = 0..n-1. Node n is never
// needed: every closed-form strategy multiplies it by a prefactor that vanishes at T.
std::vector<double> running_trapezoid(const TimeGrid& grid, const std::vector<double>& f) {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    out[k] = out[k - 1] + 0.5 * (f[k - 1] + f[k]) * grid.dt(k - 1);
  }
  return out;
}

ExecutionTrajectory sinh_form(double position, const TimeGrid& grid, double nu,
                              const std::vector<double>& integrand, double scale) {
  const double total = std::sinh(nu * grid.horizon());
  const auto running = running_trapezoid(grid, integrand);
  std::vector<double> x(grid.size());
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    x[k] = std::sinh(nu * grid.remaining(k)) * (position / total - scale * running[k]);
  }
  x[0] = position;
  return ExecutionTrajectory::from_holdings(grid, std::move(x));
}

ExecutionTrajectory linear_form(double position, const TimeGrid& grid,
                                const std::vector<double>& integrand, double scale) {
  const double horizon = grid.horizon();
  const auto running = running_trapezoid(grid, integrand);
  std::vector<double> x(grid.size());
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    x[k] = grid.remaining(k) / horizon * (position - scale * running[k]);
  }
  x[0] = position;
  return ExecutionTrajectory::from_holdings(grid, std::move(x));
}

void require_positive_nu(const ReducedObjective& objective, const char* name) {
  if (!(objective.nu > 0.0)) {
    throw InvalidArgument(std::string(name) + ": requires nu > 0 (use the nu = 0 variant)");
  }
}

void require_zero_nu(const ReducedObjective& objective, const char* name) {
  if (objective.nu != 0.0) throw InvalidArgument(std::string(name) + ": requires nu = 0");
}

}  // namespace

ExecutionTrajectory ExecutionTrajectory::from_holdings(const TimeGrid& grid,
                                                       std::vector<double> holdings) {
  if (holdings.size() != grid.size()) {
    throw InvalidArgument("trajectory: holdings length " + std::to_string(holdings.size()) +
                          " != grid size " + std::to_string(grid.size()));
  }
  holdings.back() = 0.0;
  std::vector<double> rates(grid.steps());
  for (std::size_t k = 0; k < rates.size(); ++k) {
    rates[k] = (holdings[k + 1] - holdings[k]) / grid.dt(k);
  }
  const double x0 = holdings.front();
  return ExecutionTrajectory{grid, std::move(holdings), std::move(rates), x0};
}

std::optional<std::size_t> first_negative_crossing(const ExecutionTrajectory& trajectory) {
  for (std::size_t k = 0; k < trajectory.holdings.size(); ++k) {
    if (trajectory.holdings[k] < 0.0) return k;
  }
  return std::nullopt;
}

ExecutionTrajectory vwap(double position, const TimeGrid& grid) {
  check_position(position);
  const double horizon = grid.horizon();
  ExecutionTrajectory out{grid, std::vector<double>(grid.size()),
                          std::vector<double>(grid.steps(), -position / horizon), position};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.holdings[k] = position * (grid.remaining(k) / horizon);
  }
  out.holdings.front() = position;
  out.holdings.back() = 0.0;
  return out;
}

ExecutionTrajectory mean_variance(double position, const TimeGrid& grid, double alpha,
                                  double sigma, double eta) {
  check_position(position);
  if (!(alpha > 0.0) || !(sigma > 0.0) || !(eta > 0.0)) {
    throw InvalidArgument("mean_variance: alpha, sigma and eta must be positive");
  }
  const double kappa = std::sqrt(alpha * sigma * sigma / (2.0 * eta));
  const double total = std::sinh(kappa * grid.horizon());
  std::vector<double> x(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    x[k] = position * (std::sinh(kappa * grid.remaining(k)) / total);
  }
  x[0] = position;
  return ExecutionTrajectory::from_holdings(grid, std::move(x));
}

ExecutionTrajectory gs_martingale(double position, const TimeGrid& grid,
                                  const ReducedObjective& objective, const PricePath& path) {
  check_position(position);
  require_positive_nu(objective, "gs_martingale");
  check_path(grid, path);
  const double nu = objective.nu;
  std::vector<double> f(grid.size());
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    f[k] = path[k] / (1.0 + std::cosh(nu * grid.remaining(k)));
  }
  return sinh_form(position, grid, nu, f, objective.lambda / (2.0 * nu));
}

ExecutionTrajectory gs_martingale_nu0(double position, const TimeGrid& grid,
                                      const ReducedObjective& objective, const PricePath& path) {
  check_position(position);
  require_zero_nu(objective, "gs_martingale_nu0");
  check_path(grid, path);
  return linear_form(position, grid, path.values, objective.lambda * grid.horizon() / 4.0);
}

SemimartingaleRule::SemimartingaleRule(double position, const TimeGrid& grid,
                                       const ReducedObjective& objective, const Model& model)
    : position_(position),
      objective_(objective),
      kernel_(model, grid,
              objective.nu > 0.0 ? Weight::sinh(objective.nu) : Weight::linear(), objective) {
  check_position(position);
}

ExecutionTrajectory SemimartingaleRule::operator()(const PricePath& path) const {
  const TimeGrid& grid = kernel_.grid();
  check_path(grid, path);
  std::vector<double> f(grid.size());
  if (objective_.nu > 0.0) {
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const double w = std::sinh(objective_.nu * grid.remaining(k));
      f[k] = kernel_(k, path[k]) / (w * w);
    }
    return sinh_form(position_, grid, objective_.nu, f, 0.5);
  }
  const double horizon = grid.horizon();
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double r = grid.remaining(k);
    f[k] = horizon * kernel_(k, path[k]) / (r * r);
  }
  return linear_form(position_, grid, f, 0.5);
}

ExecutionTrajectory gs_semimartingale(double position, const TimeGrid& grid,
                                      const ReducedObjective& objective, const Model& model,
                                      const PricePath& path) {
  require_positive_nu(objective, "gs_semimartingale");
  check_path(grid, path);
  return SemimartingaleRule(position, grid, objective, model)(path);
}

ExecutionTrajectory gs_semimartingale_nu0(double position, const TimeGrid& grid,
                                          const ReducedObjective& objective, const Model& model,
                                          const PricePath& path) {
  require_zero_nu(objective, "gs_semimartingale_nu0");
  check_path(grid, path);
  return SemimartingaleRule(position, grid, objective, model)(path);
}

ExecutionTrajectory expected_cost_minimizer(double position, const TimeGrid& grid, double eta,
                                            const Model& model, const PricePath& path) {
  return gs_semimartingale_nu0(position, grid, ReducedObjective::make(eta, 0.0, 0.0), model, path);
}

}  // namespace acx
