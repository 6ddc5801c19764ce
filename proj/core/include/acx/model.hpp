#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "acx/time_grid.hpp"

namespace acx {

class PathRng;

// Unaffected-price laws. Field names match the JSON schema in io.hpp.

/// S_t = s0.
struct ConstantPrice {
  double s0;
};

/// S_t = s0 + sigma W_t + drift t.
struct Bachelier {
  double s0;
  double sigma;
  double drift = 0.0;
};

/// S_t = s0 exp(sigma W_t - sigma^2 t / 2).
struct GbmMartingale {
  double s0;
  double sigma;
};

/// S_t = s0 exp(sigma W_t + (mu - sigma^2 / 2) t).
struct GbmDrift {
  double s0;
  double sigma;
  double mu;
};

/// dS = theta (mean - S) dt + sigma dW.
struct OrnsteinUhlenbeck {
  double s0;
  double theta;
  double mean;
  double sigma;
};

/// Recombining tree: each step multiplies the price by `up` with probability
/// p = (1 - down) / (up - down), else by `down`. Requires down < 1 < up, so the
/// tree is a martingale. Simulation needs a grid with exactly `steps` steps.
struct BinomialMartingale {
  double s0;
  double up;
  double down;
  std::size_t steps;

  double up_probability() const noexcept { return (1.0 - down) / (up - down); }
  /// Price at step k after j up-moves.
  double price(std::size_t k, std::size_t j) const noexcept;
};

/// S_t = s0 (1 + jump)^{N_t} exp(-intensity * jump * t), N Poisson(intensity).
/// A pure-jump martingale; positive whenever jump > -1.
struct CompensatedJump {
  double s0;
  double intensity;
  double jump;
};

using ModelVariant = std::variant<ConstantPrice, Bachelier, GbmMartingale, GbmDrift,
                                  OrnsteinUhlenbeck, BinomialMartingale, CompensatedJump>;

/// One realization of S on a grid.
struct PricePath {
  TimeGrid grid;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  double operator[](std::size_t k) const noexcept { return values[k]; }
  std::size_t size() const noexcept { return values.size(); }
};

/// An unaffected-price law: exact simulation plus the conditional-moment
/// kernels used by the semimartingale strategies.
class Model {
 public:
  /// Throws InvalidArgument on out-of-domain parameters.
  Model(ModelVariant spec);  // NOLINT(google-explicit-constructor)

  const ModelVariant& spec() const noexcept { return spec_; }
  std::string_view kind() const noexcept;
  double initial_price() const noexcept;

  /// True exactly when E[S_u | S_t = s] = s for all u >= t.
  bool is_martingale() const noexcept;

  /// E[S_u | S_t = s]. Throws InvalidArgument if u < t.
  double conditional_mean(double t, double s, double u) const;
  /// d/du E[S_u | S_t = s].
  double conditional_mean_rate(double t, double s, double u) const;

  bool has_second_moment() const noexcept;
  /// E[S_t^2] from the initial price. Throws CapabilityError when the law has
  /// no closed form here (Ornstein-Uhlenbeck, binomial tree).
  double second_moment(double t) const;

  /// Exact transition sampling of one path. `stream` selects the substream,
  /// so path i of an ensemble is simulate(grid, seed, i) regardless of order.
  PricePath simulate(const TimeGrid& grid, std::uint64_t seed, std::uint64_t stream = 0) const;

  /// Fills out[0..n] with a path drawn from rng; out.size() must be grid.size().
  void simulate_into(const TimeGrid& grid, PathRng& rng, std::span<double> out) const;

 private:
  ModelVariant spec_;
};

/// Free-function spelling of Model::simulate.
inline PricePath simulate_path(const Model& model, const TimeGrid& grid, std::uint64_t seed) {
  return model.simulate(grid, seed);
}

/// Binomial tree whose one-step log-moves are +-sigma sqrt(dt), i.e. the CRR
/// moment match of a GBM martingale on `steps` steps over [0, horizon].
BinomialMartingale fit_binomial(const GbmMartingale& gbm, std::size_t steps, double horizon);

}  // namespace acx
