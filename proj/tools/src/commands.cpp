#include "acx_cli/commands.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>

#include "acx/errors.hpp"
#include "acx/io.hpp"
#include "acx/montecarlo.hpp"
#include "acx_cli/checks.hpp"
#include "acx_cli/config.hpp"

namespace acx::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

/// Output files are assembled in memory and written only once the command
/// has finished, so a failing run leaves nothing behind.
using Outputs = std::map<std::string, std::string>;

struct Options {
  std::string command;
  fs::path config;
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> out;
  unsigned threads = 0;
  bool crossing = false;
};

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::string file_label(const std::string& label) {
  std::string out;
  for (char c : label) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    out.push_back(keep ? c : '_');
  }
  return out;
}

const Model& single_model(const ExperimentConfig& cfg, const std::string& command) {
  if (cfg.models.size() != 1) throw ConfigError("models: `" + command + "` takes a single model");
  return cfg.models.front();
}

Outputs trajectory(const ExperimentConfig& cfg, bool crossing, std::ostream& out) {
  const auto& model = single_model(cfg, "trajectory");
  const auto grid = TimeGrid::uniform(cfg.horizon, cfg.n_steps);
  const auto path = model.simulate(grid, cfg.mc.seed);
  Outputs files;
  for (const auto& rule : cfg.strategies) {
    const BoundStrategy strategy(rule, cfg.position, grid, cfg.impact, model);
    const auto x = strategy(path);
    std::ostringstream csv;
    write_trajectory_csv(csv, x, path);
    if (files.empty()) files["trajectory.csv"] = csv.str();
    files["trajectory_" + file_label(rule.label) + ".csv"] = csv.str();
    if (crossing) {
      const auto k = first_negative_crossing(x);
      out << rule.label << ": ";
      if (k) out << "first negative holding at t=" << format_double(grid[*k]) << '\n';
      else out << "no negative holdings\n";
    }
  }
  files["config.json"] = dump(cfg.echo);
  return files;
}

Outputs value(const ExperimentConfig& cfg) {
  const auto& model = single_model(cfg, "value");
  const ReducedObjective objective = cfg.impact;
  ValueReport report;
  if (model.is_martingale()) {
    if (!model.has_second_moment() && !cfg.mc_remainder) {
      throw CapabilityError("value: no closed-form second moment for '" +
                            std::string(model.kind()) + "'; set mc_remainder to estimate it");
    }
    ValueOptions options;
    options.n_steps = cfg.n_steps;
    options.mc = cfg.mc;
    report = objective.nu > 0.0
                 ? value_martingale(cfg.position, cfg.horizon, objective, model, options)
                 : value_martingale_nu0(cfg.position, cfg.horizon, objective, model, options);
  } else {
    report = value_semimartingale(cfg.position, TimeGrid::uniform(cfg.horizon, cfg.n_steps),
                                  objective, model, cfg.mc);
  }
  auto doc = to_json(report);
  doc["model"] = model_to_json(model);
  doc["config"] = cfg.echo;
  return {{"value.json", dump(doc)}};
}

Outputs compare_cmd(const ExperimentConfig& cfg) {
  const auto& model = single_model(cfg, "compare");
  if (cfg.strategies.size() < 2) throw ConfigError("strategies: `compare` needs at least two");
  const auto table = acx::compare(cfg.strategies, model, cfg.impact, cfg.position,
                                  TimeGrid::uniform(cfg.horizon, cfg.n_steps), cfg.functional,
                                  cfg.mc);
  std::ostringstream csv;
  write_compare_csv(csv, table);
  return {{"compare.csv", csv.str()}, {"config.json", dump(cfg.echo)}};
}

Outputs sweep_cmd(const ExperimentConfig& cfg) {
  if (cfg.strategies.size() != 1) throw ConfigError("strategies: `sweep` takes a single rule");
  for (std::size_t i = 0; i < cfg.models.size(); ++i) {
    if (!cfg.models[i].is_martingale()) {
      throw ConfigError("models[" + std::to_string(i) + "]: sweep requires martingale laws");
    }
  }
  const auto result = robustness_sweep(cfg.strategies.front(), cfg.models, cfg.impact,
                                       cfg.position, TimeGrid::uniform(cfg.horizon, cfg.n_steps),
                                       cfg.mc, cfg.functional);
  std::ostringstream csv;
  write_sweep_csv(csv, result);
  auto doc = to_json(result);
  doc["strategy"] = cfg.strategies.front().label;
  doc["config"] = cfg.echo;
  return {{"sweep.csv", csv.str()}, {"sweep.json", dump(doc)}};
}

Outputs verify(const ExperimentConfig& cfg, bool& all_pass, std::ostream& out) {
  const auto& checks = cfg.verify.checks;
  const bool wants_sweep = std::find(checks.begin(), checks.end(), "sweep") != checks.end();
  for (std::size_t i = 0; wants_sweep && i < cfg.models.size(); ++i) {
    if (!cfg.models[i].is_martingale()) {
      throw ConfigError("models[" + std::to_string(i) + "]: sweep requires martingale laws");
    }
  }
  json results = json::array();
  all_pass = true;
  for (const auto& name : checks) {
    const auto outcome = run_check(name, cfg);
    out << (outcome.pass ? "PASS " : "FAIL ") << name << '\n';
    all_pass = all_pass && outcome.pass;
    results.push_back({{"name", outcome.name}, {"pass", outcome.pass}, {"details", outcome.details}});
  }
  json doc{{"pass", all_pass}, {"checks", results}, {"config", cfg.echo}};
  return {{"verify.json", dump(doc)}};
}

void write_all(const fs::path& dir, const Outputs& files) {
  fs::create_directories(dir);
  for (const auto& [name, content] : files) {
    std::ofstream file(dir / name, std::ios::binary);
    file << content;
    if (!file) throw std::runtime_error("cannot write " + (dir / name).string());
  }
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal execution under linear market impact", "acx"};
  app.require_subcommand(1);
  Options opt;
  const std::pair<const char*, const char*> commands[] = {
      {"trajectory", "write the holdings schedule of each strategy on one simulated path"},
      {"value", "closed-form optimal value with a Monte Carlo cross-check"},
      {"verify", "run the configured verification checks"},
      {"compare", "paired Monte Carlo comparison of two or more strategies"},
      {"sweep", "cost of one strategy under every configured martingale model"},
  };
  for (const auto& [name, about] : commands) {
    auto* sub = app.add_subcommand(name, about);
    sub->add_option("--config", opt.config, "experiment config (JSON)")->required();
    sub->add_option("--seed", opt.seed, "override the config seed");
    sub->add_option("--out", opt.out, "output directory (overrides output_dir)");
    sub->add_option("--threads", opt.threads, "worker threads, 0 = all cores");
    if (std::string(name) == "trajectory") {
      sub->add_flag("--crossing", opt.crossing, "report the first negative-holding time");
    }
    sub->callback([&opt, name] { opt.command = name; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  ExperimentConfig cfg;
  try {
    auto doc = load_json(opt.config);
    if (opt.seed) doc["seed"] = *opt.seed;
    if (opt.out) doc["output_dir"] = opt.out->string();
    cfg = parse_config(doc);
    cfg.mc.threads = opt.threads;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    Outputs files;
    bool pass = true;
    if (opt.command == "trajectory") files = trajectory(cfg, opt.crossing, out);
    else if (opt.command == "value") files = value(cfg);
    else if (opt.command == "compare") files = compare_cmd(cfg);
    else if (opt.command == "sweep") files = sweep_cmd(cfg);
    else files = verify(cfg, pass, out);
    write_all(cfg.output_dir, files);
    return pass ? kOk : kVerifyFailed;
  } catch (const CapabilityError& e) {
    err << "capability error: " << e.what() << '\n';
    return kCapabilityError;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace acx::cli
