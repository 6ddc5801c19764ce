#pragma once

namespace acx {

/// Coefficients of the reduced objective
///   E[ int x dY + int (xdot^2 + nu^2 x^2) dt ],  Y_t = -(S_t - S_0)/eta + lambda int_0^t S_u du.
///
/// Usually derived from ImpactParams, but lambda and nu are independent here:
/// the optimal-strategy formulas hold for any (lambda, nu) pair.
struct ReducedObjective {
  double eta;
  double lambda;
  double nu;

  /// Throws InvalidArgument unless eta > 0 and lambda, nu >= 0 (all finite).
  static ReducedObjective make(double eta, double lambda, double nu);
};

/// Linear Almgren-Chriss impact: execution price S0 + eta*xdot + gamma*(x - X),
/// plus the risk multiplier lambda_tilde of the time-averaged VaR penalty.
class ImpactParams {
 public:
  /// eta > 0, gamma >= 0, lambda_tilde >= 0.
  ImpactParams(double eta, double gamma, double lambda_tilde);

  double eta() const noexcept { return eta_; }
  double gamma() const noexcept { return gamma_; }
  double lambda_tilde() const noexcept { return lambda_tilde_; }

  /// lambda = lambda_tilde / eta.
  double lambda() const noexcept { return lambda_; }
  /// nu^2 = lambda_tilde * gamma / eta.
  double nu_squared() const noexcept { return nu_squared_; }
  double nu() const noexcept { return nu_; }

  ReducedObjective reduced() const noexcept { return {eta_, lambda_, nu_}; }
  operator ReducedObjective() const noexcept { return reduced(); }  // NOLINT

 private:
  double eta_;
  double gamma_;
  double lambda_tilde_;
  double lambda_;
  double nu_squared_;
  double nu_;
};

}  // namespace acx
