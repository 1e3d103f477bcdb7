#pragma once

// FIFO solvers: full shaping, no shaping, and the ordering-based nonlinear
// program with randomized search over orderings.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reprofile/network.hpp"
#include "reprofile/solution.hpp"

namespace reprofile::fifo {

struct FifoSolution {
  std::string strategy;
  Eigen::VectorXd D;  // per flow position, seconds
  Eigen::VectorXd T;  // per link, seconds
  Eigen::VectorXd C;  // per link, Mb/s
  double total = 0.0;

  NetworkSolution to_network(const Scenario& s) const;
  // Largest D_i + sum_j T_j - d_i over all flows.
  double worst_budget_excess(const Scenario& s) const;
};

// Flow positions listed in assumed non-decreasing order of D (ties allowed).
using Ordering = std::vector<std::size_t>;

class OrderingViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Builds a solution from (D, T), provisioning each link at its minimum bandwidth.
FifoSolution evaluate(const Scenario& s, Eigen::VectorXd D, Eigen::VectorXd T, std::string strategy);

FifoSolution fs_solve(const Scenario& s);
FifoSolution ns_solve(const Scenario& s);

// max(sum r, max over flows q of sum_i sigma_i(D_q) / (T + D_q)), with each
// sigma_i(D_q) written in the branch that `order` (local indices) implies.
double nlp_closed_form_bandwidth(std::span<const TokenBucketProfile> profiles,
                                 std::span<const double> delays, double T,
                                 std::span<const std::size_t> order);

struct NlpOptions {
  int max_iterations = 5000;
  double rel_tol = 1e-7;
  int random_starts = 3;
  std::uint64_t seed = 0;
};

FifoSolution nlp_solve_for_ordering(const Scenario& s, const Ordering& order, const NlpOptions& options = {});

// Positions sorted by D-hat, ties by position.
Ordering shaping_cap_ordering(const Scenario& s);

// ceil(10 ln(max(m,2)!)) capped at 200.
std::size_t default_search_budget(std::size_t flows);

FifoSolution randomized_search(const Scenario& s, std::size_t budget, std::uint64_t seed,
                               const NlpOptions& options = {});

}  // namespace reprofile::fifo
