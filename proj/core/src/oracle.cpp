#include "acx/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "acx/costs.hpp"
#include "acx/errors.hpp"
#include "acx/rng.hpp"

namespace acx {
namespace {

std::vector<double> rate_or_zero(std::span<const double> mean_rate, std::size_t size) {
  if (mean_rate.empty()) return std::vector<double>(size, 0.0);
  if (mean_rate.size() != size) throw GridMismatch("mean rate length != grid size");
  return {mean_rate.begin(), mean_rate.end()};
}

// Trapezoid node weights of the grid.
double node_weight(const TimeGrid& grid, std::size_t k) {
  double w = 0.0;
  if (k > 0) w += 0.5 * grid.dt(k - 1);
  if (k + 1 < grid.size()) w += 0.5 * grid.dt(k);
  return w;
}

void normalize_sup(std::vector<double>& phi) {
  double peak = 0.0;
  for (double v : phi) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw InvalidArgument("perturbation direction is identically zero");
  for (double& v : phi) v /= peak;
}

bool within(const MCEstimate& e, const CheckTolerance& tol) {
  return std::abs(e.mean) <= tol.sigmas * e.std_error + tol.absolute;
}

bool not_below(const MCEstimate& e, const CheckTolerance& tol) {
  return e.mean >= -(tol.sigmas * e.std_error + tol.absolute);
}

ExecutionTrajectory shifted(const ExecutionTrajectory& x, const std::vector<double>& phi,
                            double scale) {
  std::vector<double> h(x.holdings);
  for (std::size_t k = 0; k < h.size(); ++k) h[k] += scale * phi[k];
  h.front() = x.initial_position;
  return ExecutionTrajectory::from_holdings(x.grid, std::move(h));
}

}  // namespace

// --- tree DP ---------------------------------------------------------------

PricePath TreeDpResult::path(std::span<const std::size_t> ups) const {
  if (ups.size() != grid.size()) throw GridMismatch("node sequence length != steps + 1");
  PricePath out{grid, std::vector<double>(grid.size()), 0, 0};
  for (std::size_t k = 0; k < ups.size(); ++k) {
    if (ups[k] > k || (k > 0 && (ups[k] < ups[k - 1] || ups[k] > ups[k - 1] + 1))) {
      throw InvalidArgument("invalid node sequence at step " + std::to_string(k));
    }
    out.values[k] = tree.price(k, ups[k]);
  }
  return out;
}

ExecutionTrajectory TreeDpResult::follow(double position, std::span<const std::size_t> ups) const {
  if (ups.size() != grid.size()) throw GridMismatch("node sequence length != steps + 1");
  std::vector<double> x(grid.size());
  x[0] = position;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) x[k + 1] = next_holding(k, ups[k], x[k]);
  return ExecutionTrajectory::from_holdings(grid, std::move(x));
}

TreeDpResult tree_dp(const BinomialMartingale& tree, double horizon,
                     const ReducedObjective& objective) {
  const Model check(tree);  // validates d < 1 < u, i.e. the martingale property
  if (tree.steps < 2) throw InvalidArgument("tree_dp: need at least 2 steps");
  const std::size_t n = tree.steps;
  TreeDpResult out{tree, TimeGrid::uniform(horizon, n), {}, {}, {}};
  const double dt = horizon / static_cast<double>(n);
  const double p = tree.up_probability();
  const double lambda = objective.lambda;
  const double nu2 = objective.nu * objective.nu;

  auto& value = out.value;
  value.a.assign(n + 1, 0.0);
  value.b.resize(n + 1);
  value.c.resize(n + 1);
  out.gain.assign(n, 0.0);
  out.shift.resize(n);
  value.b[n].assign(n + 1, 0.0);
  value.c[n].assign(n + 1, 0.0);

  // Last step: the whole remaining position is sold, v = -x / dt.
  value.a[n - 1] = 1.0 / dt + nu2 * dt;
  value.b[n - 1].resize(n);
  value.c[n - 1].assign(n, 0.0);
  out.shift[n - 1].assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) value.b[n - 1][j] = lambda * tree.price(n - 1, j) * dt;

  for (std::size_t k = n - 1; k-- > 0;) {
    const double a_next = value.a[k + 1];
    const double denom = 1.0 / dt + a_next;
    const double damp = 1.0 + a_next * dt;
    value.a[k] = nu2 * dt + a_next / damp;
    out.gain[k] = 1.0 / damp;
    value.b[k].resize(k + 1);
    value.c[k].resize(k + 1);
    out.shift[k].resize(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
      const double b_bar = p * value.b[k + 1][j + 1] + (1.0 - p) * value.b[k + 1][j];
      const double c_bar = p * value.c[k + 1][j + 1] + (1.0 - p) * value.c[k + 1][j];
      value.b[k][j] = lambda * tree.price(k, j) * dt + b_bar / damp;
      value.c[k][j] = c_bar - b_bar * b_bar / (4.0 * denom);
      out.shift[k][j] = -b_bar / (2.0 * denom);
    }
  }
  return out;
}

std::vector<std::size_t> sample_tree_nodes(const BinomialMartingale& tree, std::uint64_t seed,
                                           std::uint64_t stream) {
  PathRng rng(seed, stream);
  const double p = tree.up_probability();
  std::vector<std::size_t> ups(tree.steps + 1, 0);
  for (std::size_t k = 1; k <= tree.steps; ++k) ups[k] = ups[k - 1] + (rng.bernoulli(p) ? 1 : 0);
  return ups;
}

std::vector<std::size_t> shaped_tree_nodes(const BinomialMartingale& tree,
                                           const std::function<double(double)>& shape) {
  const double lu = std::log(tree.up), ld = std::log(tree.down);
  std::vector<std::size_t> ups(tree.steps + 1, 0);
  for (std::size_t k = 1; k <= tree.steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(tree.steps);
    // k ld + j (lu - ld) = shape(t)
    const double j = std::round((shape(t) - static_cast<double>(k) * ld) / (lu - ld));
    ups[k] = static_cast<std::size_t>(std::clamp(j, static_cast<double>(ups[k - 1]),
                                                 static_cast<double>(ups[k - 1] + 1)));
  }
  return ups;
}

std::vector<std::vector<std::size_t>> reference_tree_paths(const BinomialMartingale& tree, double scale) {
  const double pi = std::acos(-1.0);
  return {shaped_tree_nodes(tree, [&](double t) { return 1.5 * scale * t; }),
          shaped_tree_nodes(tree, [&](double t) { return -1.5 * scale * t; }),
          shaped_tree_nodes(tree, [&](double t) { return scale * std::sin(2 * pi * t); }),
          shaped_tree_nodes(tree, [&](double t) { return 2 * scale * std::min(t, 1 - t); })};
}

// --- Euler-Lagrange ----------------------------------------------------------

ExecutionTrajectory euler_lagrange_deterministic(double position, const TimeGrid& grid,
                                                 const ReducedObjective& objective,
                                                 std::span<const double> mean,
                                                 std::span<const double> mean_rate) {
  if (mean.size() != grid.size()) throw GridMismatch("mean path length != grid size");
  const auto rate = rate_or_zero(mean_rate, grid.size());
  const std::size_t n = grid.steps();
  const std::size_t m = n - 1;  // unknowns x_1 .. x_{n-1}
  const double nu2 = objective.nu * objective.nu;

  // Half the gradient of the functional, row k: -x_{k-1}/dt_{k-1}
  //   + (1/dt_{k-1} + 1/dt_k + nu^2 w_k) x_k - x_{k+1}/dt_k + w_k y_k / 2 = 0.
  std::vector<double> lower(m), diag(m), upper(m), rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t k = i + 1;
    const double w = node_weight(grid, k);
    const double y = objective.lambda * mean[k] - rate[k] / objective.eta;
    lower[i] = -1.0 / grid.dt(k - 1);
    upper[i] = -1.0 / grid.dt(k);
    diag[i] = 1.0 / grid.dt(k - 1) + 1.0 / grid.dt(k) + nu2 * w;
    rhs[i] = -0.5 * w * y;
  }
  rhs[0] -= lower[0] * position;

  // Thomas algorithm; the matrix is symmetric and diagonally dominant.
  for (std::size_t i = 1; i < m; ++i) {
    const double factor = lower[i] / diag[i - 1];
    diag[i] -= factor * upper[i - 1];
    rhs[i] -= factor * rhs[i - 1];
  }
  std::vector<double> x(grid.size(), 0.0);
  x[0] = position;
  x[m] = rhs[m - 1] / diag[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) x[i + 1] = (rhs[i] - upper[i] * x[i + 2]) / diag[i];
  return ExecutionTrajectory::from_holdings(grid, std::move(x));
}

double euler_lagrange_residual(const ExecutionTrajectory& trajectory,
                               const ReducedObjective& objective, std::span<const double> mean,
                               std::span<const double> mean_rate) {
  const auto& grid = trajectory.grid;
  if (mean.size() != grid.size()) throw GridMismatch("mean path length != grid size");
  const auto rate = rate_or_zero(mean_rate, grid.size());
  const auto& x = trajectory.holdings;
  const double nu2 = objective.nu * objective.nu;
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    const double w = node_weight(grid, k);
    const double y = objective.lambda * mean[k] - rate[k] / objective.eta;
    const double r = (x[k] - x[k - 1]) / grid.dt(k - 1) - (x[k + 1] - x[k]) / grid.dt(k) +
                     w * (nu2 * x[k] + 0.5 * y);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

// --- perturbation ------------------------------------------------------------

std::vector<std::vector<double>> random_directions(const TimeGrid& grid, std::size_t count,
                                                   std::uint64_t seed, std::size_t knots) {
  if (knots < 1) throw InvalidArgument("random_directions: need at least one knot");
  std::vector<std::vector<double>> out;
  out.reserve(count);
  const double horizon = grid.horizon();
  for (std::size_t d = 0; d < count; ++d) {
    PathRng rng(seed, d);
    std::vector<double> knot_t(knots + 2);
    std::vector<double> knot_v(knots + 2, 0.0);
    for (std::size_t i = 0; i < knot_t.size(); ++i) {
      knot_t[i] = horizon * static_cast<double>(i) / static_cast<double>(knots + 1);
    }
    for (std::size_t i = 1; i <= knots; ++i) knot_v[i] = rng.normal();
    std::vector<double> phi(grid.size(), 0.0);
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
      const double t = grid[k];
      auto it = std::upper_bound(knot_t.begin(), knot_t.end(), t);
      const auto hi = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
          it - knot_t.begin(), static_cast<std::ptrdiff_t>(knot_t.size() - 1)));
      const std::size_t lo = hi - 1;
      const double s = (t - knot_t[lo]) / (knot_t[hi] - knot_t[lo]);
      phi[k] = (1.0 - s) * knot_v[lo] + s * knot_v[hi];
    }
    normalize_sup(phi);
    out.push_back(std::move(phi));
  }
  return out;
}

std::vector<double> aligned_direction(double position, const TimeGrid& grid,
                                      const ReducedObjective& objective, const Model& model) {
  PricePath frozen{grid, std::vector<double>(grid.size(), model.initial_price()), 0, 0};
  const BoundStrategy optimal(StrategyRule::of(StrategyKind::Optimal), position, grid, objective,
                              model);
  const auto best = optimal(frozen);
  const auto linear = vwap(position, grid);
  std::vector<double> phi(grid.size());
  for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = best[k] - linear[k];
  phi.front() = 0.0;
  phi.back() = 0.0;
  normalize_sup(phi);
  return phi;
}

PerturbationReport perturbation_check(const StrategyRule& rule, const Model& model,
                                      const ReducedObjective& objective, double position,
                                      const TimeGrid& grid, const McConfig& mc,
                                      std::span<const std::vector<double>> directions,
                                      double delta, CheckTolerance tolerance) {
  if (!(delta > 0.0)) throw InvalidArgument("perturbation_check: delta must be positive");
  for (const auto& phi : directions) {
    if (phi.size() != grid.size()) throw GridMismatch("direction length != grid size");
    if (phi.front() != 0.0 || phi.back() != 0.0) {
      throw InvalidArgument("perturbation directions must vanish at both ends");
    }
  }
  const BoundStrategy strategy(rule, position, grid, objective, model);
  const std::size_t m = directions.size();

  struct Sample {
    std::vector<double> plus;
    std::vector<double> minus;
  };
  const auto samples = parallel_map(mc.n_paths, mc.threads, [&](std::size_t i) {
    const auto path = model.simulate(grid, mc.seed, i);
    const auto x = strategy(path);
    const double base = reduced_functional(x, path, objective);
    Sample s{std::vector<double>(m), std::vector<double>(m)};
    for (std::size_t d = 0; d < m; ++d) {
      s.plus[d] = reduced_functional(shifted(x, directions[d], delta), path, objective) - base;
      s.minus[d] = reduced_functional(shifted(x, directions[d], -delta), path, objective) - base;
    }
    return s;
  });

  PerturbationReport report;
  report.delta = delta;
  report.all_stationary = true;
  report.all_convex = true;
  std::vector<double> slope(mc.n_paths), plus(mc.n_paths), minus(mc.n_paths);
  for (std::size_t d = 0; d < m; ++d) {
    for (std::size_t i = 0; i < mc.n_paths; ++i) {
      plus[i] = samples[i].plus[d];
      minus[i] = samples[i].minus[d];
      slope[i] = (plus[i] - minus[i]) / (2.0 * delta);
    }
    DirectionResult r;
    r.slope = summarize(slope, mc.seed);
    r.gap_plus = summarize(plus, mc.seed);
    r.gap_minus = summarize(minus, mc.seed);
    r.curvature = 0.5 * (r.gap_plus.mean + r.gap_minus.mean);
    r.stationary = within(r.slope, tolerance);
    r.convex = r.curvature > 0.0 && not_below(r.gap_plus, tolerance) &&
               not_below(r.gap_minus, tolerance);
    report.all_stationary = report.all_stationary && r.stationary;
    report.all_convex = report.all_convex && r.convex;
    report.descent_found = report.descent_found || !r.stationary;
    report.directions.push_back(r);
  }
  return report;
}

// --- submartingale -------------------------------------------------------------

SubmartingaleReport submartingale_check(const StrategyRule& rule, const Model& model,
                                        const ReducedObjective& objective, double position,
                                        const TimeGrid& grid,
                                        std::span<const double> checkpoints, const McConfig& mc,
                                        CheckTolerance tolerance) {
  const double horizon = grid.horizon();
  std::vector<std::size_t> nodes{0};
  for (double t : checkpoints) {
    if (!(t > 0.0 && t < horizon)) {
      throw InvalidArgument("submartingale_check: checkpoints must lie strictly inside (0, T)");
    }
    const auto k = grid.nearest_index(t);
    if (k == 0 || k >= grid.steps()) {
      throw InvalidArgument("submartingale_check: checkpoint too close to the boundary");
    }
    nodes.push_back(k);
  }
  const BoundStrategy strategy(rule, position, grid, objective, model);
  const SemimartingaleRule kernel(position, grid, objective, model);
  const double nu = objective.nu;
  auto cost_to_go_factor = [&](std::size_t k) {
    const double r = grid.remaining(k);
    return nu > 0.0 ? nu / std::tanh(nu * r) : 1.0 / r;
  };

  const auto samples = parallel_map(mc.n_paths, mc.threads, [&](std::size_t i) {
    const auto path = model.simulate(grid, mc.seed, i);
    const auto x = strategy(path);
    const auto running = running_reduced_functional(x, path, objective);
    const std::size_t n = grid.steps();
    std::vector<double> h(grid.size());
    for (std::size_t k = 0; k <= n; ++k) h[k] = kernel.h(k, path[k]);
    std::vector<double> future(grid.size(), 0.0);  // int_{t_k}^T H^2
    for (std::size_t k = n; k-- > 0;) {
      future[k] = future[k + 1] + 0.5 * (h[k] * h[k] + h[k + 1] * h[k + 1]) * grid.dt(k);
    }
    std::vector<double> out(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const std::size_t k = nodes[j];
      out[j] = running[k] + cost_to_go_factor(k) * x[k] * x[k] + x[k] * h[k] - 0.25 * future[k];
    }
    return out;
  });

  SubmartingaleReport report;
  report.monotone = true;
  report.flat = true;
  std::vector<double> value(mc.n_paths), step(mc.n_paths), drift(mc.n_paths);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    for (std::size_t i = 0; i < mc.n_paths; ++i) {
      value[i] = samples[i][j];
      step[i] = j == 0 ? 0.0 : samples[i][j] - samples[i][j - 1];
      drift[i] = samples[i][j] - samples[i][0];
    }
    CheckpointResult cp;
    cp.time = grid[nodes[j]];
    cp.node = nodes[j];
    cp.value = summarize(value, mc.seed);
    cp.increment = summarize(step, mc.seed);
    cp.from_start = summarize(drift, mc.seed);
    report.monotone = report.monotone && not_below(cp.increment, tolerance);
    report.flat = report.flat && within(cp.from_start, tolerance);
    report.checkpoints.push_back(cp);
  }
  return report;
}

}  // namespace acx
