#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "acx/kernel.hpp"
#include "oracles.hpp"

namespace acx {
namespace {

std::vector<double> tail_of(const TimeGrid& grid, std::size_t k) {
  const auto times = grid.times();
  return {times.begin() + static_cast<std::ptrdiff_t>(k), times.end()};
}

TEST(Kernel, MartingaleSinhReduction) {
  const auto grid = TimeGrid::uniform(1.3, 1000);
  const auto objective = ReducedObjective::make(0.7, 1.4, 1.1);
  const double nu = objective.nu;
  for (const auto& m : {Model(GbmMartingale{1.0, 0.2}), Model(Bachelier{1.0, 0.5}),
                        Model(CompensatedJump{1.0, 2.0, 0.1})}) {
    for (std::size_t k : {0u, 250u, 999u}) {
      const double r = grid.remaining(k);
      for (double s : {0.4, 1.0, 2.5}) {
        const double expected = objective.lambda * s * std::sinh(nu * r) * std::tanh(nu * r / 2) / nu;
        const double got = weighted_future_Y(m, grid[k], s, tail_of(grid, k), Weight::sinh(nu), objective);
        EXPECT_NEAR(got, expected, 1e-8 * std::abs(expected)) << m.kind() << " k=" << k;
      }
    }
  }
}

TEST(Kernel, MartingaleLinearReduction) {
  const auto grid = TimeGrid::uniform(2.0, 200);
  const auto objective = ReducedObjective::make(1.0, 0.8, 0.0);
  const Model m(GbmMartingale{1.0, 0.3});
  for (std::size_t k : {0u, 77u, 199u}) {
    const double r = grid.remaining(k);
    EXPECT_NEAR(weighted_future_Y(m, grid[k], 1.7, tail_of(grid, k), Weight::linear(), objective),
                0.8 * 1.7 * r * r / 2, 1e-12);
  }
}

TEST(Kernel, NoRiskMartingaleIsZero) {
  const auto grid = TimeGrid::uniform(1.0, 50);
  const auto objective = ReducedObjective::make(1.0, 0.0, 1.0);
  const Model m(GbmMartingale{1.0, 0.3});
  EXPECT_EQ(weighted_future_Y(m, 0.0, 1.0, grid.times(), Weight::sinh(1.0), objective), 0.0);
  EXPECT_EQ(weighted_future_Y(m, 0.0, 1.0, grid.times(), Weight::linear(), objective), 0.0);
}

TEST(Kernel, BachelierDriftLinearWeight) {
  const double b = 0.5, eta = 2.0;
  const auto grid = TimeGrid::uniform(1.0, 40);
  const auto objective = ReducedObjective::make(eta, 0.0, 0.0);
  const Model m(Bachelier{1.0, 0.3, b});
  for (std::size_t k : {0u, 10u, 39u}) {
    const double r = grid.remaining(k);
    EXPECT_NEAR(weighted_future_Y(m, grid[k], 0.9, tail_of(grid, k), Weight::linear(), objective),
                -(b / eta) * r * r / 2, 1e-14);
  }
}

TEST(Kernel, DriftedLawsAgainstFineQuadrature) {
  // The kernel integrates the drift on the grid; error is second order in dt.
  const double T = 1.0;
  const auto objective = ReducedObjective::make(0.8, 1.2, 1.5);
  const std::vector<Model> models{Model(GbmDrift{1.0, 0.2, 0.6}),
                                  Model(OrnsteinUhlenbeck{1.0, 2.0, 1.5, 0.3})};
  for (const auto& m : models) {
    for (auto weight : {Weight::sinh(objective.nu), Weight::linear()}) {
      const double t = 0.3, s = 0.9;
      const double expected = oracle::romberg(
          [&](double u) {
            return weight(T, u) * (objective.lambda * m.conditional_mean(t, s, u) -
                                   m.conditional_mean_rate(t, s, u) / objective.eta);
          },
          t, T);
      double previous = 0.0;
      for (std::size_t n : {1000, 2000}) {
        const auto grid = TimeGrid::uniform(T, n);
        const std::size_t k = n * 3 / 10;
        const double err = std::abs(weighted_future_Y(m, t, s, tail_of(grid, k), weight, objective) - expected);
        EXPECT_LE(err, 1e-5 * std::abs(expected)) << m.kind() << " n=" << n;
        if (previous > 1e-12) EXPECT_NEAR(previous / err, 4.0, 0.5) << m.kind();
        previous = err;
      }
    }
  }
}

TEST(Kernel, TableMatchesDirectEvaluation) {
  const auto grid = TimeGrid::uniform(1.0, 64);
  const auto objective = ReducedObjective::make(1.0, 1.0, 0.7);
  const Model m(OrnsteinUhlenbeck{1.0, 1.0, 1.3, 0.2});
  const YKernel kernel(m, grid, Weight::sinh(0.7), objective);
  for (std::size_t k = 0; k <= 64; k += 8) {
    for (double s : {0.5, 1.5}) {
      const double direct = weighted_future_Y(m, grid[k], s, tail_of(grid, k), Weight::sinh(0.7), objective);
      EXPECT_NEAR(kernel(k, s), direct, 1e-13 * (1 + std::abs(direct)));
    }
  }
  EXPECT_EQ(kernel.normalized(64, 1.0), 0.0);
  EXPECT_NEAR(kernel.normalized(3, 1.2), kernel(3, 1.2) / std::sinh(0.7 * grid.remaining(3)), 1e-15);
}

TEST(Kernel, CellWeightsIntegrateHats) {
  for (auto weight : {Weight::sinh(3.0), Weight::linear()}) {
    const double a = 0.2, b = 0.45, T = 1.0;
    const auto w = detail::cell_weights(weight, T, a, b);
    const double left = oracle::romberg([&](double u) { return weight(T, u) * (b - u) / (b - a); }, a, b);
    const double right = oracle::romberg([&](double u) { return weight(T, u) * (u - a) / (b - a); }, a, b);
    EXPECT_NEAR(w.left, left, 1e-14);
    EXPECT_NEAR(w.right, right, 1e-14);
  }
}

}  // namespace
}  // namespace acx
