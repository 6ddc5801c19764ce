#include <gtest/gtest.h>

#include <cmath>

#include "acx/errors.hpp"
#include "acx/montecarlo.hpp"
#include "oracles.hpp"

namespace acx {
namespace {

const ImpactParams kParams(1.0, 1.0, 1.0);  // eta = lambda = nu = 1

TEST(Estimate, ConstantPriceHasNoNoise) {
  const auto grid = TimeGrid::uniform(1.0, 50);
  const Model m(ConstantPrice{1.0});
  const auto e = estimate(StrategyRule::of(StrategyKind::Optimal), m, kParams, 1.0, grid,
                          Functional::Reduced, {100, 3, 0});
  const auto path = m.simulate(grid, 3);
  EXPECT_LT(e.std_error, 1e-14);
  EXPECT_DOUBLE_EQ(e.mean, reduced_functional(gs_martingale(1.0, grid, kParams, path), path, kParams));
  EXPECT_EQ(e.n_paths, 100u);
  EXPECT_EQ(e.seed, 3u);
}

TEST(Estimate, NeedsTwoPaths) {
  EXPECT_THROW(estimate(StrategyRule::of(StrategyKind::Vwap), Model(ConstantPrice{1.0}), kParams, 1.0,
                        TimeGrid::uniform(1.0, 5), Functional::Reduced, {1, 3, 0}),
               InvalidArgument);
}

TEST(Estimate, StderrScalesAsInverseRootN) {
  const auto grid = TimeGrid::uniform(1.0, 50);
  const Model m(GbmMartingale{1.0, 0.3});
  const auto rule = StrategyRule::of(StrategyKind::Vwap);
  const auto a = estimate(rule, m, kParams, 1.0, grid, Functional::RealizedCost, {20000, 3, 0});
  const auto b = estimate(rule, m, kParams, 1.0, grid, Functional::RealizedCost, {40000, 3, 0});
  EXPECT_NEAR(b.std_error / a.std_error, 1 / std::sqrt(2.0), 0.2 / std::sqrt(2.0));
}

TEST(Estimate, IndependentOfThreadCount) {
  const auto grid = TimeGrid::uniform(1.0, 50);
  const Model m(CompensatedJump{1.0, 2.0, 0.1});
  const auto rule = StrategyRule::of(StrategyKind::Optimal);
  const auto one = estimate(rule, m, kParams, 1.0, grid, Functional::Reduced, {3001, 8, 1});
  for (unsigned threads : {2u, 5u, 16u}) {
    const auto many = estimate(rule, m, kParams, 1.0, grid, Functional::Reduced, {3001, 8, threads});
    EXPECT_EQ(one.mean, many.mean);
    EXPECT_EQ(one.std_error, many.std_error);
  }
}

TEST(Compare, OptimalBeatsVwapWithPairedSignificance) {
  const auto grid = TimeGrid::uniform(1.0, 100);
  const std::vector<StrategyRule> rules{StrategyRule::of(StrategyKind::Optimal, "optimal"),
                                        StrategyRule::of(StrategyKind::Vwap, "vwap")};
  const auto table = compare(rules, Model(GbmMartingale{1.0, 0.3}), kParams, 1.0, grid,
                             Functional::Reduced, {10000, 1, 0});
  EXPECT_EQ(table.best, 0u);
  EXPECT_EQ(table.rows[0].rank, 0u);
  EXPECT_EQ(table.rows[1].rank, 1u);
  const auto& diff = table.rows[1].difference;
  EXPECT_GT(diff.mean, 3 * diff.std_error);
  EXPECT_LT(diff.std_error, table.rows[1].unpaired_std_error);
}

TEST(Compare, IdenticalRulesDifferByExactlyZero) {
  const auto grid = TimeGrid::uniform(1.0, 50);
  const std::vector<StrategyRule> rules{StrategyRule::of(StrategyKind::Optimal, "a"),
                                        StrategyRule::of(StrategyKind::Optimal, "b")};
  const auto table = compare(rules, Model(GbmMartingale{1.0, 0.3}), kParams, 1.0, grid,
                             Functional::Reduced, {500, 1, 0});
  for (const auto& row : table.rows) {
    EXPECT_EQ(row.difference.mean, 0.0);
    EXPECT_EQ(row.difference.std_error, 0.0);
  }
  EXPECT_THROW(compare(std::span(rules).first(1), Model(ConstantPrice{1.0}), kParams, 1.0, grid,
                       Functional::Reduced, {500, 1, 0}),
               InvalidArgument);
}

TEST(Compare, MeanVarianceGapOnFrozenPath) {
  // lambda_tilde = alpha sigma^2 / (2 gamma) makes x^MV the lambda = 0 part of x*.
  const double alpha = 2.0, sigma = 0.5, gamma = 0.25, eta = 1.0;
  const ImpactParams ip(eta, gamma, alpha * sigma * sigma / (2 * gamma));
  const auto grid = TimeGrid::uniform(1.0, 200);
  const Model m(ConstantPrice{1.0});
  const std::vector<StrategyRule> rules{StrategyRule::of(StrategyKind::Optimal, "optimal"),
                                        StrategyRule::mean_variance(alpha, sigma, "mv")};
  const auto table = compare(rules, m, ip, 1.0, grid, Functional::Reduced, {10, 1, 0});
  const auto path = m.simulate(grid, 1);
  const double gap = reduced_functional(mean_variance(1.0, grid, alpha, sigma, eta), path, ip) -
                     reduced_functional(gs_martingale(1.0, grid, ip, path), path, ip);
  EXPECT_GT(gap, 0.0);
  EXPECT_NEAR(table.rows[1].difference.mean, gap, 1e-14);
}

TEST(Sweep, OptimalRuleIsRobustVwapIsNot) {
  const auto grid = TimeGrid::uniform(1.0, 100);
  const std::vector<Model> models{Model(ConstantPrice{1.0}), Model(Bachelier{1.0, 0.2}),
                                  Model(GbmMartingale{1.0, 0.2}), Model(CompensatedJump{1.0, 2.0, 0.1})};
  const McConfig mc{10000, 4, 0};
  const auto good = robustness_sweep(StrategyRule::of(StrategyKind::Optimal), models, kParams, 1.0, grid, mc);
  const auto bad = robustness_sweep(StrategyRule::of(StrategyKind::Vwap), models, kParams, 1.0, grid, mc);
  for (std::size_t i = 0; i < models.size(); ++i) {
    EXPECT_LE(std::abs(good.entries[i].excess), 4 * good.entries[i].excess_std_error + 1e-4) << i;
    EXPECT_GT(bad.entries[i].excess, 3 * bad.entries[i].excess_std_error) << i;
  }
  double worst = -INFINITY;
  for (const auto& e : bad.entries) worst = std::max(worst, e.estimate.mean);
  EXPECT_EQ(bad.worst_case, worst);
  EXPECT_EQ(bad.entries[bad.worst].estimate.mean, worst);
}

TEST(Sweep, SingleModelReducesToEstimate) {
  const auto grid = TimeGrid::uniform(1.0, 50);
  const std::vector<Model> models{Model(GbmMartingale{1.0, 0.2})};
  const McConfig mc{2000, 4, 0};
  const auto rule = StrategyRule::of(StrategyKind::Vwap);
  const auto sweep = robustness_sweep(rule, models, kParams, 1.0, grid, mc);
  const auto e = estimate(rule, models[0], kParams, 1.0, grid, Functional::MartingaleObjective, mc);
  EXPECT_EQ(sweep.entries[0].estimate.mean, e.mean);
  EXPECT_EQ(sweep.worst_case, e.mean);
}

TEST(Sweep, RejectsNonMartingaleLaws) {
  const std::vector<Model> models{Model(GbmMartingale{1.0, 0.2}), Model(GbmDrift{1.0, 0.2, 0.1})};
  EXPECT_THROW(robustness_sweep(StrategyRule::of(StrategyKind::Optimal), models, kParams, 1.0,
                                TimeGrid::uniform(1.0, 10), {10, 1, 0}),
               InvalidArgument);
}

TEST(Names, RoundTrip) {
  for (auto kind : {StrategyKind::Vwap, StrategyKind::MeanVariance, StrategyKind::GsMartingale,
                    StrategyKind::GsMartingaleNu0, StrategyKind::GsSemimartingale,
                    StrategyKind::GsSemimartingaleNu0, StrategyKind::ExpectedCost, StrategyKind::Optimal}) {
    EXPECT_EQ(parse_strategy_kind(to_string(kind)), kind);
  }
  for (auto f : {Functional::RealizedCost, Functional::RiskInclusive, Functional::Reduced,
                 Functional::MartingaleObjective}) {
    EXPECT_EQ(parse_functional(to_string(f)), f);
  }
  EXPECT_THROW(parse_strategy_kind("twap"), InvalidArgument);
  EXPECT_THROW(parse_strategy_kind("fixed"), InvalidArgument);
}

}  // namespace
}  // namespace acx
