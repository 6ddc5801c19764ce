#include "acx_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "acx/errors.hpp"
#include "acx/io.hpp"

namespace acx::cli {
namespace {

using nlohmann::json;

const json* field(const json& doc, const char* key) {
  const auto it = doc.find(key);
  return it == doc.end() ? nullptr : &*it;
}

double real(const json& doc, const std::string& where, const char* key, double fallback) {
  const json* v = field(doc, key);
  if (!v) return fallback;
  if (!v->is_number() || !std::isfinite(v->get<double>())) {
    throw ConfigError(where + key + ": expected a finite number");
  }
  return v->get<double>();
}

double positive(const json& doc, const std::string& where, const char* key, double fallback) {
  const double v = real(doc, where, key, fallback);
  if (!(v > 0.0)) throw ConfigError(where + key + ": must be > 0");
  return v;
}

std::size_t integer(const json& doc, const std::string& where, const char* key,
                    std::size_t fallback, std::size_t minimum) {
  const json* v = field(doc, key);
  if (!v) return fallback;
  if (!v->is_number_integer() || v->get<long long>() < static_cast<long long>(minimum)) {
    throw ConfigError(where + key + ": expected an integer >= " + std::to_string(minimum));
  }
  return v->get<std::size_t>();
}

void only(const json& doc, const std::string& where, const std::set<std::string>& allowed) {
  if (!doc.is_object()) {
    throw ConfigError((where.empty() ? std::string("config") : where.substr(0, where.size() - 1)) +
                      ": expected an object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + key + ": unknown field");
  }
}

StrategyRule strategy(const json& doc, const std::string& where) {
  if (doc.is_string()) {
    try {
      const auto kind = parse_strategy_kind(doc.get<std::string>());
      if (kind == StrategyKind::MeanVariance) {
        throw ConfigError(where + ": mean_variance needs an object with alpha and sigma");
      }
      return StrategyRule::of(kind, doc.get<std::string>());
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  only(doc, where + ".", {"kind", "label", "alpha", "sigma"});
  const json* kind = field(doc, "kind");
  if (!kind || !kind->is_string()) throw ConfigError(where + ".kind: missing");
  std::string label = kind->get<std::string>();
  if (const json* l = field(doc, "label")) {
    if (!l->is_string() || l->get<std::string>().empty()) {
      throw ConfigError(where + ".label: expected a non-empty string");
    }
    label = l->get<std::string>();
  }
  StrategyKind k;
  try {
    k = parse_strategy_kind(kind->get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ".kind: " + e.what());
  }
  if (k == StrategyKind::MeanVariance) {
    return StrategyRule::mean_variance(positive(doc, where + ".", "alpha", NAN),
                                       positive(doc, where + ".", "sigma", NAN), label);
  }
  if (field(doc, "alpha") || field(doc, "sigma")) {
    throw ConfigError(where + ": alpha/sigma only apply to mean_variance");
  }
  return StrategyRule::of(k, label);
}

VerifyOptions verify_options(const json& doc) {
  const std::string w = "verify.";
  only(doc, w,
       {"checks", "strategy", "checkpoints", "n_directions", "delta", "sigmas", "sweep_sigmas",
        "absolute", "tree_steps", "tree_paths", "tree_sigma", "tree_tolerance", "el_tolerance",
        "drift", "nu_small", "nu_tolerance", "trials"});
  VerifyOptions out;
  static const std::set<std::string> known{"tree_dp",      "euler_lagrange", "value",
                                           "sweep",        "perturbation",   "submartingale",
                                           "nu_limit",     "invariants"};
  if (const json* c = field(doc, "checks")) {
    if (!c->is_array()) throw ConfigError("verify.checks: expected an array");
    out.checks.clear();
    for (std::size_t i = 0; i < c->size(); ++i) {
      const auto& name = (*c)[i];
      const auto where = "verify.checks[" + std::to_string(i) + "]";
      if (!name.is_string() || !known.contains(name.get<std::string>())) {
        throw ConfigError(where + ": unknown check");
      }
      out.checks.push_back(name.get<std::string>());
    }
  } else {
    out.checks.assign({"tree_dp", "euler_lagrange", "value", "sweep", "perturbation",
                       "submartingale", "nu_limit", "invariants"});
  }
  if (const json* s = field(doc, "strategy")) out.strategy = strategy(*s, "verify.strategy");
  if (const json* c = field(doc, "checkpoints")) {
    if (!c->is_array() || c->empty()) throw ConfigError("verify.checkpoints: expected a non-empty array");
    out.checkpoints.clear();
    for (std::size_t i = 0; i < c->size(); ++i) {
      const auto where = "verify.checkpoints[" + std::to_string(i) + "]";
      if (!(*c)[i].is_number()) throw ConfigError(where + ": expected a number");
      const double f = (*c)[i].get<double>();
      if (!(f > 0.0 && f < 1.0)) throw ConfigError(where + ": must lie in (0, 1)");
      out.checkpoints.push_back(f);
    }
  }
  out.n_directions = integer(doc, w, "n_directions", out.n_directions, 1);
  out.delta = positive(doc, w, "delta", out.delta);
  out.sigmas = positive(doc, w, "sigmas", out.sigmas);
  out.sweep_sigmas = positive(doc, w, "sweep_sigmas", out.sweep_sigmas);
  out.absolute = real(doc, w, "absolute", out.absolute);
  if (out.absolute < 0.0) throw ConfigError("verify.absolute: must be >= 0");
  out.tree_steps = integer(doc, w, "tree_steps", out.tree_steps, 2);
  out.tree_paths = integer(doc, w, "tree_paths", out.tree_paths, 1);
  out.tree_sigma = positive(doc, w, "tree_sigma", out.tree_sigma);
  out.tree_tolerance = positive(doc, w, "tree_tolerance", out.tree_tolerance);
  out.el_tolerance = positive(doc, w, "el_tolerance", out.el_tolerance);
  out.drift = real(doc, w, "drift", out.drift);
  out.nu_small = positive(doc, w, "nu_small", out.nu_small);
  out.nu_tolerance = positive(doc, w, "nu_tolerance", out.nu_tolerance);
  out.trials = integer(doc, w, "trials", out.trials, 1);
  return out;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  only(doc, "",
       {"model", "models", "impact", "position", "horizon", "n_steps", "n_paths", "seed",
        "strategies", "functional", "mc_remainder", "verify", "output_dir"});
  ExperimentConfig cfg;
  cfg.echo = doc;
  cfg.echo.erase("output_dir");  // where results go is not part of the experiment

  const json* model = field(doc, "model");
  const json* models = field(doc, "models");
  if (model && models) throw ConfigError("model: give either model or models, not both");
  if (model) {
    cfg.models.push_back(model_from_json(*model, "model"));
  } else if (models) {
    if (!models->is_array() || models->empty()) {
      throw ConfigError("models: expected a non-empty array");
    }
    for (std::size_t i = 0; i < models->size(); ++i) {
      cfg.models.push_back(model_from_json((*models)[i], "models[" + std::to_string(i) + "]"));
    }
  } else {
    throw ConfigError("model: missing");
  }

  const json* impact = field(doc, "impact");
  if (!impact) throw ConfigError("impact: missing");
  only(*impact, "impact.", {"eta", "gamma", "lambda_tilde"});
  const double eta = positive(*impact, "impact.", "eta", NAN);
  const double gamma = real(*impact, "impact.", "gamma", 0.0);
  const double lambda_tilde = real(*impact, "impact.", "lambda_tilde", 0.0);
  if (gamma < 0.0) throw ConfigError("impact.gamma: must be >= 0");
  if (lambda_tilde < 0.0) throw ConfigError("impact.lambda_tilde: must be >= 0");
  cfg.impact = ImpactParams(eta, gamma, lambda_tilde);

  cfg.position = real(doc, "", "position", cfg.position);
  cfg.horizon = positive(doc, "", "horizon", cfg.horizon);
  cfg.n_steps = integer(doc, "", "n_steps", cfg.n_steps, 2);
  cfg.mc.n_paths = integer(doc, "", "n_paths", cfg.mc.n_paths, 2);
  if (const json* s = field(doc, "seed")) {
    if (!s->is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    cfg.mc.seed = s->get<std::uint64_t>();
  }

  if (const json* s = field(doc, "strategies")) {
    if (!s->is_array() || s->empty()) throw ConfigError("strategies: expected a non-empty array");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < s->size(); ++i) {
      const auto where = "strategies[" + std::to_string(i) + "]";
      cfg.strategies.push_back(strategy((*s)[i], where));
      if (!labels.insert(cfg.strategies.back().label).second) {
        throw ConfigError(where + ": duplicate label '" + cfg.strategies.back().label + "'");
      }
    }
  } else {
    cfg.strategies.push_back(StrategyRule::of(StrategyKind::Optimal, "optimal"));
  }

  if (const json* f = field(doc, "functional")) {
    if (!f->is_string()) throw ConfigError("functional: expected a string");
    try {
      cfg.functional = parse_functional(f->get<std::string>());
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("functional: ") + e.what());
    }
  }
  if (const json* r = field(doc, "mc_remainder")) {
    if (!r->is_boolean()) throw ConfigError("mc_remainder: expected true or false");
    cfg.mc_remainder = r->get<bool>();
  }
  if (const json* v = field(doc, "verify")) cfg.verify = verify_options(*v);
  else cfg.verify = verify_options(json::object());

  if (const json* o = field(doc, "output_dir")) {
    if (!o->is_string()) throw ConfigError("output_dir: expected a string");
    cfg.output_dir = o->get<std::string>();
  }
  return cfg;
}

json load_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config: cannot open " + file.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
}

}  // namespace acx::cli
