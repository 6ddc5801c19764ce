#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "acx/model.hpp"
#include "acx/montecarlo.hpp"
#include "acx/costs.hpp"
#include "acx/strategies.hpp"

namespace acx {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

/// Model fields by kind:
///   constant            s0
///   bachelier           s0, sigma, drift (optional, default 0)
///   gbm_martingale      s0, sigma
///   gbm_drift           s0, sigma, mu
///   ornstein_uhlenbeck  s0, theta, mean, sigma
///   binomial_martingale s0, up, down, steps
///   compensated_jump    s0, intensity, jump
/// Unknown fields are rejected. Errors are ConfigError prefixed by `where`.
Model model_from_json(const nlohmann::json& doc, const std::string& where = "model");
nlohmann::json model_to_json(const Model& model);

nlohmann::json to_json(const MCEstimate& estimate);
/// {closed_form, closed_form_stderr, mc_mean, mc_stderr, n_paths, components}.
/// The mc_* fields are null when no simulation was run.
nlohmann::json to_json(const ValueReport& report);

/// Header `t,x,v,S`; the last row has an empty v (no interval after T).
void write_trajectory_csv(std::ostream& out, const ExecutionTrajectory& trajectory,
                          const PricePath& path);

struct TrajectoryRow {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;  ///< NaN on the last row
  double s = 0.0;
};

/// Inverse of write_trajectory_csv. Throws ConfigError on malformed input.
std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in);

/// label,mean,stderr,n_paths,rank,diff_vs_best,diff_stderr,unpaired_stderr
void write_compare_csv(std::ostream& out, const CompareTable& table);

/// model,mean,stderr,n_paths,closed_form,closed_form_stderr,excess,excess_stderr
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
nlohmann::json to_json(const SweepResult& sweep);

}  // namespace acx
