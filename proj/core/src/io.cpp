#include "acx/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <type_traits>

#include "acx/errors.hpp"

namespace acx {
namespace {

using nlohmann::json;

double number(const json& doc, const std::string& where, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ConfigError(where + "." + key + ": missing");
  if (!it->is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + "." + key + ": not finite");
  return v;
}

double number_or(const json& doc, const std::string& where, const char* key, double fallback) {
  return doc.contains(key) ? number(doc, where, key) : fallback;
}

std::size_t count(const json& doc, const std::string& where, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ConfigError(where + "." + key + ": missing");
  if (!it->is_number_integer() || it->get<long long>() < 0) {
    throw ConfigError(where + "." + key + ": expected a non-negative integer");
  }
  return it->get<std::size_t>();
}

void only_fields(const json& doc, const std::string& where, std::set<std::string> allowed) {
  allowed.insert("kind");
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + "." + key + ": unknown field");
  }
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("csv: bad number '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

Model model_from_json(const json& doc, const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where + ": expected an object");
  const auto it = doc.find("kind");
  if (it == doc.end() || !it->is_string()) throw ConfigError(where + ".kind: missing");
  const auto kind = it->get<std::string>();
  try {
    if (kind == "constant") {
      only_fields(doc, where, {"s0"});
      return Model(ConstantPrice{number(doc, where, "s0")});
    }
    if (kind == "bachelier") {
      only_fields(doc, where, {"s0", "sigma", "drift"});
      return Model(Bachelier{number(doc, where, "s0"), number(doc, where, "sigma"),
                             number_or(doc, where, "drift", 0.0)});
    }
    if (kind == "gbm_martingale") {
      only_fields(doc, where, {"s0", "sigma"});
      return Model(GbmMartingale{number(doc, where, "s0"), number(doc, where, "sigma")});
    }
    if (kind == "gbm_drift") {
      only_fields(doc, where, {"s0", "sigma", "mu"});
      return Model(GbmDrift{number(doc, where, "s0"), number(doc, where, "sigma"),
                            number(doc, where, "mu")});
    }
    if (kind == "ornstein_uhlenbeck") {
      only_fields(doc, where, {"s0", "theta", "mean", "sigma"});
      return Model(OrnsteinUhlenbeck{number(doc, where, "s0"), number(doc, where, "theta"),
                                     number(doc, where, "mean"), number(doc, where, "sigma")});
    }
    if (kind == "binomial_martingale") {
      only_fields(doc, where, {"s0", "up", "down", "steps"});
      return Model(BinomialMartingale{number(doc, where, "s0"), number(doc, where, "up"),
                                      number(doc, where, "down"), count(doc, where, "steps")});
    }
    if (kind == "compensated_jump") {
      only_fields(doc, where, {"s0", "intensity", "jump"});
      return Model(CompensatedJump{number(doc, where, "s0"), number(doc, where, "intensity"),
                                   number(doc, where, "jump")});
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ".kind: unknown model '" + kind + "'");
}

json model_to_json(const Model& model) {
  return std::visit(
      [&](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        json out{{"kind", std::string(model.kind())}, {"s0", m.s0}};
        if constexpr (std::is_same_v<T, Bachelier>) {
          out["sigma"] = m.sigma;
          out["drift"] = m.drift;
        } else if constexpr (std::is_same_v<T, GbmMartingale>) {
          out["sigma"] = m.sigma;
        } else if constexpr (std::is_same_v<T, GbmDrift>) {
          out["sigma"] = m.sigma;
          out["mu"] = m.mu;
        } else if constexpr (std::is_same_v<T, OrnsteinUhlenbeck>) {
          out["theta"] = m.theta;
          out["mean"] = m.mean;
          out["sigma"] = m.sigma;
        } else if constexpr (std::is_same_v<T, BinomialMartingale>) {
          out["up"] = m.up;
          out["down"] = m.down;
          out["steps"] = m.steps;
        } else if constexpr (std::is_same_v<T, CompensatedJump>) {
          out["intensity"] = m.intensity;
          out["jump"] = m.jump;
        }
        return out;
      },
      model.spec());
}

json to_json(const MCEstimate& e) {
  return {{"mean", e.mean}, {"stderr", e.std_error}, {"n_paths", e.n_paths}, {"seed", e.seed}};
}

json to_json(const ValueReport& report) {
  json out{
      {"closed_form", report.closed_form},
      {"closed_form_stderr", report.closed_form_std_error},
      {"components",
       {{"leading", report.components.leading},
        {"linear", report.components.linear},
        {"quadratic", report.components.quadratic}}},
  };
  if (report.mc) {
    out["mc_mean"] = report.mc->mean;
    out["mc_stderr"] = report.mc->std_error;
    out["n_paths"] = report.mc->n_paths;
    out["seed"] = report.mc->seed;
  } else {
    out["mc_mean"] = nullptr;
    out["mc_stderr"] = nullptr;
    out["n_paths"] = 0;
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const ExecutionTrajectory& trajectory,
                          const PricePath& path) {
  if (!(path.grid == trajectory.grid)) throw GridMismatch("trajectory and path grids differ");
  out << "t,x,v,S\n";
  const std::size_t n = trajectory.grid.steps();
  for (std::size_t k = 0; k <= n; ++k) {
    out << format_double(trajectory.grid[k]) << ',' << format_double(trajectory.holdings[k]) << ',';
    if (k < n) out << format_double(trajectory.rates[k]);
    out << ',' << format_double(path[k]) << '\n';
  }
}

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "t,x,v,S") throw ConfigError("csv: missing header");
  std::vector<TrajectoryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() != 4) throw ConfigError("csv: expected 4 columns in '" + line + "'");
    rows.push_back({parse_double(cells[0]), parse_double(cells[1]),
                    cells[2].empty() ? std::numeric_limits<double>::quiet_NaN()
                                     : parse_double(cells[2]),
                    parse_double(cells[3])});
  }
  return rows;
}

void write_compare_csv(std::ostream& out, const CompareTable& table) {
  out << "label,mean,stderr,n_paths,rank,diff_vs_best,diff_stderr,unpaired_stderr\n";
  for (const auto& r : table.rows) {
    out << r.label << ',' << format_double(r.estimate.mean) << ','
        << format_double(r.estimate.std_error) << ',' << r.estimate.n_paths << ',' << r.rank
        << ',' << format_double(r.difference.mean) << ',' << format_double(r.difference.std_error)
        << ',' << format_double(r.unpaired_std_error) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "model,mean,stderr,n_paths,closed_form,closed_form_stderr,excess,excess_stderr\n";
  for (const auto& e : sweep.entries) {
    out << e.model << ',' << format_double(e.estimate.mean) << ','
        << format_double(e.estimate.std_error) << ',' << e.estimate.n_paths << ','
        << (e.closed_form ? format_double(*e.closed_form) : std::string()) << ','
        << format_double(e.closed_form_std_error) << ',' << format_double(e.excess) << ','
        << format_double(e.excess_std_error) << '\n';
  }
}

json to_json(const SweepResult& sweep) {
  json entries = json::array();
  for (const auto& e : sweep.entries) {
    entries.push_back({{"model", e.model},
                       {"estimate", to_json(e.estimate)},
                       {"closed_form", e.closed_form ? json(*e.closed_form) : json(nullptr)},
                       {"closed_form_stderr", e.closed_form_std_error},
                       {"excess", e.excess},
                       {"excess_stderr", e.excess_std_error}});
  }
  return {{"entries", entries},
          {"worst", sweep.entries.empty() ? json(nullptr) : json(sweep.entries[sweep.worst].model)},
          {"worst_case", sweep.worst_case}};
}

}  // namespace acx
