#pragma once

// Network-wide solution: shaping delays, per-link priority assignment and
// class deadlines, provisioned bandwidths.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "reprofile/network.hpp"
#include "reprofile/provision.hpp"

namespace reprofile {

struct LinkPlan {
  int link = 0;
  std::vector<std::size_t> flows;       // positions in Scenario::flows
  PriorityAssignment assignment;        // aligned with flows
  std::vector<double> class_deadlines;  // T_hj, index h - 1
  double bandwidth = 0.0;               // C_j
};

struct NetworkSolution {
  std::string strategy;
  Eigen::VectorXd shaping_delays;  // D, indexed by flow position
  std::vector<LinkPlan> links;
  double total = 0.0;

  Eigen::VectorXd bandwidths() const;
};

using SpSolution = NetworkSolution;

LinkClassState make_link_state(const Scenario& s, const LinkPlan& plan,
                               const Eigen::VectorXd& shaping_delays);

struct SolutionCheck {
  bool feasible = true;
  double worst_budget_excess = 0.0;   // max_i D_i + sum T - d_i (seconds)
  double worst_bandwidth_gap = 0.0;   // max_j |C_j - recomputed| / recomputed
  std::vector<LinkBandwidth> recomputed;
};

// Re-derives every C_j from the plan and checks the end-to-end budget
// D_i + sum_j T_{p_ij j} <= d_i (+1e-9) and C_j >= recomputed (1e-9 relative).
SolutionCheck check_solution(const Scenario& s, const NetworkSolution& sol);

// Fills bandwidth and total from the plans.
void recompute_bandwidths(const Scenario& s, NetworkSolution& sol);

}  // namespace reprofile
