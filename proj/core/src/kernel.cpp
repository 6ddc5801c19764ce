#include "acx/kernel.hpp"

#include <array>
#include <cmath>

#include "acx/errors.hpp"

namespace acx {

double Weight::operator()(double horizon, double u) const noexcept {
  return kind == Kind::Sinh ? std::sinh(nu * (horizon - u)) : horizon - u;
}

namespace detail {
namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                          0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kWeights = {0.2369268850561891, 0.4786286704993665,
                                            0.5688888888888889, 0.4786286704993665,
                                            0.2369268850561891};

}  // namespace

CellWeights cell_weights(Weight weight, double horizon, double a, double b) noexcept {
  const double h = b - a;
  // Linear weights times hats are quadratics, integrated exactly by one panel.
  // Sinh weights get panels of width <= 0.5 / nu, far below rounding error.
  std::size_t panels = 1;
  if (weight.kind == Weight::Kind::Sinh && weight.nu * h > 0.5) {
    panels = static_cast<std::size_t>(std::ceil(weight.nu * h / 0.5));
  }
  const double width = h / static_cast<double>(panels);
  CellWeights out{0.0, 0.0};
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double mid = lo + 0.5 * width;
    for (std::size_t i = 0; i < kNodes.size(); ++i) {
      const double u = mid + 0.5 * width * kNodes[i];
      const double wq = 0.5 * width * kWeights[i] * weight(horizon, u);
      out.left += wq * (b - u) / h;
      out.right += wq * (u - a) / h;
    }
  }
  return out;
}

}  // namespace detail

double weighted_future_Y(const Model& model, double t, double s, std::span<const double> tail,
                         Weight weight, const ReducedObjective& objective) {
  if (tail.empty() || tail.front() != t) {
    throw InvalidArgument("weighted_future_Y: grid tail must start at t");
  }
  const double horizon = tail.back();
  auto integrand = [&](double u) {
    return objective.lambda * model.conditional_mean(t, s, u) -
           model.conditional_mean_rate(t, s, u) / objective.eta;
  };
  double total = 0.0;
  double g_left = integrand(tail[0]);
  for (std::size_t j = 0; j + 1 < tail.size(); ++j) {
    if (!(tail[j + 1] > tail[j])) throw InvalidArgument("weighted_future_Y: tail not increasing");
    const double g_right = integrand(tail[j + 1]);
    const auto w = detail::cell_weights(weight, horizon, tail[j], tail[j + 1]);
    total += w.left * g_left + w.right * g_right;
    g_left = g_right;
  }
  return total;
}

YKernel::YKernel(const Model& model, const TimeGrid& grid, Weight weight,
                 const ReducedObjective& objective)
    : grid_(grid), weight_(weight), slope_(grid.size(), 0.0), offset_(grid.size(), 0.0) {
  const std::size_t n = grid.steps();
  const double horizon = grid.horizon();
  std::vector<detail::CellWeights> cells(n);
  for (std::size_t j = 0; j < n; ++j) {
    cells[j] = detail::cell_weights(weight, horizon, grid[j], grid[j + 1]);
  }
  const bool martingale = model.is_martingale();
  std::vector<double> g0(grid.size());
  std::vector<double> g1(grid.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double t = grid[k];
    if (martingale) {
      // m(u) = s: the kernel is lambda * s * int w.
      double mass = 0.0;
      for (std::size_t j = k; j < n; ++j) mass += cells[j].left + cells[j].right;
      slope_[k] = objective.lambda * mass;
      continue;
    }
    for (std::size_t j = k; j <= n; ++j) {
      const double u = grid[j];
      g0[j] = objective.lambda * model.conditional_mean(t, 0.0, u) -
              model.conditional_mean_rate(t, 0.0, u) / objective.eta;
      g1[j] = objective.lambda * model.conditional_mean(t, 1.0, u) -
              model.conditional_mean_rate(t, 1.0, u) / objective.eta;
    }
    double at0 = 0.0;
    double at1 = 0.0;
    for (std::size_t j = k; j < n; ++j) {
      at0 += cells[j].left * g0[j] + cells[j].right * g0[j + 1];
      at1 += cells[j].left * g1[j] + cells[j].right * g1[j + 1];
    }
    offset_[k] = at0;
    slope_[k] = at1 - at0;
  }
}

double YKernel::normalized(std::size_t k, double s) const noexcept {
  if (k + 1 >= grid_.size()) return 0.0;
  return (*this)(k, s) / weight_(grid_.horizon(), grid_[k]);
}

}  // namespace acx
