#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace facons {

struct RunConfig {
  std::string input;
  std::string command = "analyze";
  int weight_box = 3;
  std::string order = "grevlex";  // lex | grevlex, for printed equations
  std::string format = "json";    // json | dot | text
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::size_t coverage_trials = 20;
};

/// Exit codes: 0 clean, 1 violations or incomplete strata, 2 input errors,
/// 3 resource limits.
struct RunResult {
  int exit_code = 0;
  std::string output;
  std::vector<std::string> warnings;
  std::string error;
};

RunResult run_command(const RunConfig& config);

}  // namespace facons
