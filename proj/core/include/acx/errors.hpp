#pragma once

#include <stdexcept>
#include <string>

namespace acx {

/// Rejected input: a parameter or argument outside its documented domain.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A path and a trajectory (or two trajectories) live on different grids.
class GridMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A malformed configuration document. The message starts with the field path,
/// e.g. "model.sigma: must be >= 0".
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// The requested quantity has no closed form for this price law.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace acx
