#include "acx/model.hpp"

#include <cmath>
#include <string>

#include "acx/errors.hpp"
#include "acx/rng.hpp"

namespace acx {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

bool finite(double v) { return std::isfinite(v); }

void validate(const ModelVariant& spec) {
  std::visit(
      Overloaded{
          [](const ConstantPrice& m) { require(finite(m.s0), "constant: s0 must be finite"); },
          [](const Bachelier& m) {
            require(finite(m.s0) && finite(m.drift), "bachelier: s0 and drift must be finite");
            require(m.sigma >= 0.0 && finite(m.sigma), "bachelier: sigma must be >= 0");
          },
          [](const GbmMartingale& m) {
            require(m.s0 > 0.0 && finite(m.s0), "gbm_martingale: s0 must be positive");
            require(m.sigma >= 0.0 && finite(m.sigma), "gbm_martingale: sigma must be >= 0");
          },
          [](const GbmDrift& m) {
            require(m.s0 > 0.0 && finite(m.s0), "gbm_drift: s0 must be positive");
            require(m.sigma >= 0.0 && finite(m.sigma), "gbm_drift: sigma must be >= 0");
            require(finite(m.mu), "gbm_drift: mu must be finite");
          },
          [](const OrnsteinUhlenbeck& m) {
            require(finite(m.s0) && finite(m.mean), "ornstein_uhlenbeck: s0 and mean must be finite");
            require(m.theta >= 0.0 && finite(m.theta), "ornstein_uhlenbeck: theta must be >= 0");
            require(m.sigma >= 0.0 && finite(m.sigma), "ornstein_uhlenbeck: sigma must be >= 0");
          },
          [](const BinomialMartingale& m) {
            require(m.s0 > 0.0 && finite(m.s0), "binomial_martingale: s0 must be positive");
            require(m.up > m.down, "binomial_martingale: up must exceed down");
            require(m.down > 0.0 && m.down < 1.0 && m.up > 1.0 && finite(m.up),
                    "binomial_martingale: need 0 < down < 1 < up");
            require(m.steps >= 1, "binomial_martingale: steps must be >= 1");
          },
          [](const CompensatedJump& m) {
            require(m.s0 > 0.0 && finite(m.s0), "compensated_jump: s0 must be positive");
            require(m.intensity >= 0.0 && finite(m.intensity),
                    "compensated_jump: intensity must be >= 0");
            require(m.jump > -1.0 && finite(m.jump), "compensated_jump: jump must exceed -1");
          },
      },
      spec);
}

// Variance of the OU transition over dt: sigma^2 (1 - e^{-2 theta dt}) / (2 theta).
double ou_transition_variance(const OrnsteinUhlenbeck& m, double dt) {
  if (m.theta == 0.0) return m.sigma * m.sigma * dt;
  return m.sigma * m.sigma * (-std::expm1(-2.0 * m.theta * dt)) / (2.0 * m.theta);
}

}  // namespace

double BinomialMartingale::price(std::size_t k, std::size_t j) const noexcept {
  return s0 * std::pow(up, static_cast<double>(j)) * std::pow(down, static_cast<double>(k - j));
}

Model::Model(ModelVariant spec) : spec_(std::move(spec)) { validate(spec_); }

std::string_view Model::kind() const noexcept {
  return std::visit(Overloaded{
                        [](const ConstantPrice&) { return std::string_view("constant"); },
                        [](const Bachelier&) { return std::string_view("bachelier"); },
                        [](const GbmMartingale&) { return std::string_view("gbm_martingale"); },
                        [](const GbmDrift&) { return std::string_view("gbm_drift"); },
                        [](const OrnsteinUhlenbeck&) {
                          return std::string_view("ornstein_uhlenbeck");
                        },
                        [](const BinomialMartingale&) {
                          return std::string_view("binomial_martingale");
                        },
                        [](const CompensatedJump&) { return std::string_view("compensated_jump"); },
                    },
                    spec_);
}

double Model::initial_price() const noexcept {
  return std::visit([](const auto& m) { return m.s0; }, spec_);
}

bool Model::is_martingale() const noexcept {
  return std::visit(Overloaded{
                        [](const Bachelier& m) { return m.drift == 0.0; },
                        [](const GbmDrift& m) { return m.mu == 0.0; },
                        [](const OrnsteinUhlenbeck& m) { return m.theta == 0.0; },
                        [](const auto&) { return true; },
                    },
                    spec_);
}

double Model::conditional_mean(double t, double s, double u) const {
  if (u < t) throw InvalidArgument("conditional_mean: u must be >= t");
  const double h = u - t;
  return std::visit(Overloaded{
                        [&](const Bachelier& m) { return s + m.drift * h; },
                        [&](const GbmDrift& m) { return s * std::exp(m.mu * h); },
                        [&](const OrnsteinUhlenbeck& m) {
                          return m.mean + (s - m.mean) * std::exp(-m.theta * h);
                        },
                        [&](const auto&) { return s; },
                    },
                    spec_);
}

double Model::conditional_mean_rate(double t, double s, double u) const {
  if (u < t) throw InvalidArgument("conditional_mean_rate: u must be >= t");
  const double h = u - t;
  return std::visit(Overloaded{
                        [&](const Bachelier& m) { return m.drift; },
                        [&](const GbmDrift& m) { return m.mu * s * std::exp(m.mu * h); },
                        [&](const OrnsteinUhlenbeck& m) {
                          return -m.theta * (s - m.mean) * std::exp(-m.theta * h);
                        },
                        [&](const auto&) { return 0.0; },
                    },
                    spec_);
}

bool Model::has_second_moment() const noexcept {
  return !std::holds_alternative<OrnsteinUhlenbeck>(spec_) &&
         !std::holds_alternative<BinomialMartingale>(spec_);
}

double Model::second_moment(double t) const {
  return std::visit(
      Overloaded{
          [&](const ConstantPrice& m) { return m.s0 * m.s0; },
          [&](const Bachelier& m) {
            const double mean = m.s0 + m.drift * t;
            return mean * mean + m.sigma * m.sigma * t;
          },
          [&](const GbmMartingale& m) { return m.s0 * m.s0 * std::exp(m.sigma * m.sigma * t); },
          [&](const GbmDrift& m) {
            return m.s0 * m.s0 * std::exp((2.0 * m.mu + m.sigma * m.sigma) * t);
          },
          [&](const CompensatedJump& m) {
            return m.s0 * m.s0 * std::exp(m.intensity * m.jump * m.jump * t);
          },
          [&](const auto&) -> double {
            throw CapabilityError("second_moment: no closed form for model '" +
                                  std::string(kind()) + "'");
          },
      },
      spec_);
}

PricePath Model::simulate(const TimeGrid& grid, std::uint64_t seed, std::uint64_t stream) const {
  PricePath path{grid, std::vector<double>(grid.size()), seed, stream};
  PathRng rng(seed, stream);
  simulate_into(grid, rng, path.values);
  return path;
}

void Model::simulate_into(const TimeGrid& grid, PathRng& rng, std::span<double> out) const {
  if (out.size() != grid.size()) throw InvalidArgument("simulate_into: output size != grid size");
  const std::size_t n = grid.steps();
  out[0] = initial_price();
  std::visit(
      Overloaded{
          [&](const ConstantPrice& m) {
            for (std::size_t k = 1; k <= n; ++k) out[k] = m.s0;
          },
          [&](const Bachelier& m) {
            for (std::size_t k = 0; k < n; ++k) {
              const double dt = grid.dt(k);
              out[k + 1] = out[k] + m.drift * dt + m.sigma * std::sqrt(dt) * rng.normal();
            }
          },
          [&](const GbmMartingale& m) {
            for (std::size_t k = 0; k < n; ++k) {
              const double dt = grid.dt(k);
              out[k + 1] = out[k] * std::exp(m.sigma * std::sqrt(dt) * rng.normal() -
                                             0.5 * m.sigma * m.sigma * dt);
            }
          },
          [&](const GbmDrift& m) {
            for (std::size_t k = 0; k < n; ++k) {
              const double dt = grid.dt(k);
              out[k + 1] = out[k] * std::exp(m.sigma * std::sqrt(dt) * rng.normal() +
                                             (m.mu - 0.5 * m.sigma * m.sigma) * dt);
            }
          },
          [&](const OrnsteinUhlenbeck& m) {
            for (std::size_t k = 0; k < n; ++k) {
              const double dt = grid.dt(k);
              const double mean = m.mean + (out[k] - m.mean) * std::exp(-m.theta * dt);
              out[k + 1] = mean + std::sqrt(ou_transition_variance(m, dt)) * rng.normal();
            }
          },
          [&](const BinomialMartingale& m) {
            if (n != m.steps) {
              throw InvalidArgument("binomial_martingale: grid has " + std::to_string(n) +
                                    " steps, tree has " + std::to_string(m.steps));
            }
            const double p = m.up_probability();
            std::size_t ups = 0;
            for (std::size_t k = 1; k <= n; ++k) {
              if (rng.bernoulli(p)) ++ups;
              out[k] = m.price(k, ups);
            }
          },
          [&](const CompensatedJump& m) {
            const double log_jump = std::log1p(m.jump);
            for (std::size_t k = 0; k < n; ++k) {
              const double dt = grid.dt(k);
              const auto jumps = static_cast<double>(rng.poisson(m.intensity * dt));
              out[k + 1] = out[k] * std::exp(jumps * log_jump - m.intensity * m.jump * dt);
            }
          },
      },
      spec_);
}

BinomialMartingale fit_binomial(const GbmMartingale& gbm, std::size_t steps, double horizon) {
  if (steps < 1 || !(horizon > 0.0)) throw InvalidArgument("fit_binomial: bad steps/horizon");
  if (!(gbm.sigma > 0.0)) throw InvalidArgument("fit_binomial: sigma must be positive");
  const double move = gbm.sigma * std::sqrt(horizon / static_cast<double>(steps));
  return BinomialMartingale{gbm.s0, std::exp(move), std::exp(-move), steps};
}

}  // namespace acx
