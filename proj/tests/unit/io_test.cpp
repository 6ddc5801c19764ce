#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "acx/errors.hpp"
#include "acx/io.hpp"
#include "acx/rng.hpp"

namespace acx {
namespace {

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
  PathRng rng(1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.normal() * std::pow(10.0, 40 * rng.uniform() - 20);
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(ModelJson, RoundTripsEveryVariant) {
  const std::vector<Model> models{
      Model(ConstantPrice{1.0}), Model(Bachelier{1.0, 0.2, 0.1}), Model(GbmMartingale{1.0, 0.2}),
      Model(GbmDrift{1.0, 0.2, 0.05}), Model(OrnsteinUhlenbeck{1.0, 2.0, 1.1, 0.3}),
      Model(BinomialMartingale{1.0, 1.1, 0.9, 12}), Model(CompensatedJump{1.0, 2.0, -0.1})};
  for (const auto& m : models) {
    const auto doc = model_to_json(m);
    const auto back = model_from_json(doc);
    EXPECT_EQ(model_to_json(back), doc) << m.kind();
    EXPECT_EQ(back.kind(), m.kind());
  }
}

TEST(ModelJson, ExampleDocument) {
  const auto m = model_from_json(nlohmann::json::parse(R"({"kind": "gbm_martingale", "s0": 1.0, "sigma": 0.2})"));
  EXPECT_EQ(m.kind(), "gbm_martingale");
  EXPECT_EQ(m.initial_price(), 1.0);
}

void expect_config_error(const char* text, const std::string& prefix) {
  try {
    model_from_json(nlohmann::json::parse(text), "model");
    FAIL() << "accepted " << text;
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind(prefix, 0), 0u) << e.what();
  }
}

TEST(ModelJson, ErrorsNameTheField) {
  expect_config_error(R"({"kind": "gbm_martingale", "s0": 1.0})", "model.sigma");
  expect_config_error(R"({"kind": "gbm_martingale", "s0": 1.0, "sigma": "x"})", "model.sigma");
  expect_config_error(R"({"kind": "gbm_martingale", "s0": 1.0, "sigma": 0.1, "mu": 1})", "model.mu");
  expect_config_error(R"({"kind": "heston", "s0": 1.0})", "model.kind");
  expect_config_error(R"({"s0": 1.0})", "model.kind");
  expect_config_error(R"({"kind": "gbm_martingale", "s0": 1.0, "sigma": -0.1})", "model:");
  expect_config_error(R"({"kind": "binomial_martingale", "s0": 1.0, "up": 1.1, "down": 0.9, "steps": -2})",
                      "model.steps");
  expect_config_error(R"([1, 2])", "model:");
}

TEST(TrajectoryCsv, RoundTripIsExact) {
  const auto grid = TimeGrid::uniform(1.0, 37);
  const Model m(GbmMartingale{1.0, 0.3});
  const auto path = m.simulate(grid, 2);
  const auto x = gs_martingale(1.0, grid, ReducedObjective::make(1, 1, 1), path);
  std::stringstream csv;
  write_trajectory_csv(csv, x, path);
  EXPECT_EQ(csv.str().substr(0, 8), "t,x,v,S\n");
  const auto rows = read_trajectory_csv(csv);
  ASSERT_EQ(rows.size(), grid.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].t, grid[k]);
    EXPECT_EQ(rows[k].x, x[k]);
    EXPECT_EQ(rows[k].s, path[k]);
    if (k < grid.steps()) EXPECT_EQ(rows[k].v, x.rates[k]);
    else EXPECT_TRUE(std::isnan(rows[k].v));
  }
}

TEST(TrajectoryCsv, RejectsMalformedInput) {
  std::stringstream no_header("0,1,2,3\n");
  EXPECT_THROW(read_trajectory_csv(no_header), ConfigError);
  std::stringstream bad("t,x,v,S\n0,1,abc,1\n");
  EXPECT_THROW(read_trajectory_csv(bad), ConfigError);
  std::stringstream short_row("t,x,v,S\n0,1\n");
  EXPECT_THROW(read_trajectory_csv(short_row), ConfigError);
}

TEST(ValueJson, Fields) {
  ValueReport r;
  r.closed_form = 1.5;
  r.components = {1.0, 0.75, -0.25};
  auto doc = to_json(r);
  EXPECT_EQ(doc["closed_form"], 1.5);
  EXPECT_TRUE(doc["mc_mean"].is_null());
  EXPECT_EQ(doc["n_paths"], 0);
  EXPECT_EQ(doc["components"]["quadratic"], -0.25);
  r.mc = MCEstimate{1.49, 0.01, 1000, 7};
  doc = to_json(r);
  EXPECT_EQ(doc["mc_mean"], 1.49);
  EXPECT_EQ(doc["mc_stderr"], 0.01);
  EXPECT_EQ(doc["n_paths"], 1000);
}

}  // namespace
}  // namespace acx
