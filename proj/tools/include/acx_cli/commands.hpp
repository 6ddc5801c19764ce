#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace acx::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kConfigError = 2,
  kCapabilityError = 3,
  kIoError = 4,
};

/// Full command-line entry point: `acx <command> --config PATH [--seed N]
/// [--out DIR] [--threads N] [--crossing]`. Messages go to `out` and `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace acx::cli
