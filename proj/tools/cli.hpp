#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace expmoment::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNoConvergence = 3;

// Dispatches one subcommand. args excludes the program name. Results go to
// out (or the file named by --output); diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Runs the experiments in an INI-style config file in order. Every section
// is validated (command known, keys known) before anything executes.
int run_config(const std::string& path, std::ostream& out, std::ostream& err);

}  // namespace expmoment::cli
