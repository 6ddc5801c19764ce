#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "acx_cli/config.hpp"

namespace acx::cli {

/// Outcome of one verification check: `pass` plus the measured numbers.
struct CheckOutcome {
  std::string name;
  bool pass = false;
  nlohmann::json details;
};

/// Runs the named check ("tree_dp", "euler_lagrange", "value", "sweep",
/// "perturbation", "submartingale", "nu_limit", "invariants") on `cfg`.
/// Strategy-dependent checks use cfg.verify.strategy.
CheckOutcome run_check(const std::string& name, const ExperimentConfig& cfg);

}  // namespace acx::cli
