#include "acx/impact_params.hpp"

#include <cmath>

#include "acx/errors.hpp"

namespace acx {

ReducedObjective ReducedObjective::make(double eta, double lambda, double nu) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be >= 0");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("nu must be >= 0");
  return {eta, lambda, nu};
}

ImpactParams::ImpactParams(double eta, double gamma, double lambda_tilde)
    : eta_(eta), gamma_(gamma), lambda_tilde_(lambda_tilde) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be positive");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be >= 0");
  if (!(lambda_tilde >= 0.0) || !std::isfinite(lambda_tilde)) {
    throw InvalidArgument("lambda_tilde must be >= 0");
  }
  lambda_ = lambda_tilde_ / eta_;
  nu_squared_ = lambda_tilde_ * gamma_ / eta_;
  nu_ = std::sqrt(nu_squared_);
}

}  // namespace acx
