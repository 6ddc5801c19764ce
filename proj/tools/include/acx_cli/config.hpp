#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "acx/impact_params.hpp"
#include "acx/model.hpp"
#include "acx/montecarlo.hpp"

namespace acx::cli {

/// Settings of `acx verify`. Unset values fall back to the defaults below,
/// which reproduce the acceptance settings.
struct VerifyOptions {
  std::vector<std::string> checks;  ///< run in this order; may be empty
  StrategyRule strategy = StrategyRule::of(StrategyKind::Optimal, "optimal");
  std::vector<double> checkpoints{0.25, 0.5, 0.75};  ///< fractions of T
  std::size_t n_directions = 10;
  double delta = 0.05;
  double sigmas = 3.0;          ///< significance for perturbation/submartingale
  double sweep_sigmas = 4.0;    ///< significance for value and sweep agreement
  double absolute = 1e-5;       ///< discretization allowance
  std::size_t tree_steps = 200;
  std::size_t tree_paths = 64;
  double tree_sigma = 0.2;
  double tree_tolerance = 0.02;
  double el_tolerance = 1e-4;
  double drift = 0.5;           ///< Euler-Lagrange drift case
  double nu_small = 1e-4;
  double nu_tolerance = 1e-3;
  std::size_t trials = 1000;    ///< structural invariants
};

struct ExperimentConfig {
  std::vector<Model> models;
  ImpactParams impact{1.0, 0.0, 0.0};
  double position = 1.0;
  double horizon = 1.0;
  std::size_t n_steps = 500;
  McConfig mc;
  std::vector<StrategyRule> strategies;
  Functional functional = Functional::Reduced;
  /// `value` on a martingale law without a closed-form second moment: estimate
  /// the remainder by simulation instead of failing with a capability error.
  bool mc_remainder = false;
  VerifyOptions verify;
  std::filesystem::path output_dir = ".";
  /// The document as given, with --seed/--out overrides applied.
  nlohmann::json echo;
};

/// Validates the whole document before anything runs. Throws ConfigError
/// whose message starts with the offending field path.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Reads and parses a file; JSON syntax errors become ConfigError too.
nlohmann::json load_json(const std::filesystem::path& file);

}  // namespace acx::cli
