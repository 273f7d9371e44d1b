#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && args[0] == "run-config") {
    if (args.size() != 2) {
      std::cerr << "error: run-config takes exactly one config path\n";
      return expmoment::cli::kExitInvalid;
    }
    return expmoment::cli::run_config(args[1], std::cout, std::cerr);
  }
  return expmoment::cli::run(args, std::cout, std::cerr);
}
