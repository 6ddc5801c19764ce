#include <iostream>
#include <string>
#include <vector>

#include "acx_cli/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return acx::cli::run(args, std::cout, std::cerr);
}
