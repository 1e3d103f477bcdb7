#pragma once

// Command-line front end: solve, compare, sweep, generate.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reprofile/network.hpp"
#include "reprofile/solution.hpp"

namespace reprofile::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInvalid = 2, kOracleRefused = 3 };

struct SolveOptions {
  std::string strategy = "gr";    // ns | fs | gr | nlp
  std::uint64_t seed = 0;
  std::vector<double> gamma_grid;  // empty: default grid
  int gamma_depth = 2;
  double epsilon = 1e-3;
  std::optional<std::size_t> budget;  // nlp orderings; default from flow count
};

// Dispatches on the scenario's scheduler. Throws std::invalid_argument for a
// strategy the scheduler does not support.
NetworkSolution solve(const Scenario& s, const SolveOptions& options);

// Applies --scheduler / --classes overrides.
Scenario with_scheduler(Scenario s, const std::string& scheduler, std::optional<int> classes);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reprofile::cli
