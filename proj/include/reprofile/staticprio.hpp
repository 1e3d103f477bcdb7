#pragma once

// Static-priority solvers: 1-D k-means priority assignment, the deadline
// adjustment heuristic and greedy reprofiling over a global shaping ratio.

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "reprofile/network.hpp"
#include "reprofile/provision.hpp"
#include "reprofile/random.hpp"
#include "reprofile/solution.hpp"

namespace reprofile::sp {

// T~_ij per flow position i and path position p (link s.flows[i].path[p]).
struct LocalDeadlines {
  std::vector<std::vector<double>> value;

  static LocalDeadlines even_split(const Scenario& s, const Eigen::VectorXd& D);
  // Largest D_i + sum_p T~_ip - d_i.
  double worst_budget_excess(const Scenario& s, const Eigen::VectorXd& D) const;
};

// Exact dynamic-programming 1-D k-means; the cluster of smallest deadlines
// is class 1. Equal deadlines always share a class.
PriorityAssignment kmeans_assign(std::span<const double> deadlines, int k);

// Alternative boundary strategies used for comparison.
PriorityAssignment same_size_assign(std::span<const double> deadlines, int k);
PriorityAssignment uniform_assign(std::span<const double> deadlines, int k);
PriorityAssignment random_assign(std::span<const double> deadlines, int k, Rng& rng);

// T_hj = min member deadline (0 for empty classes).
std::vector<double> class_deadlines_from(std::span<const double> deadlines, const PriorityAssignment& a);

// Builds a solution from D and T~: per-link k-means, class deadlines, bandwidths.
SpSolution evaluate_local_deadlines(const Scenario& s, const Eigen::VectorXd& D, const LocalDeadlines& local,
                                    std::string strategy);

SpSolution sp_ns_solve(const Scenario& s);
SpSolution sp_fs_solve(const Scenario& s);

struct DeadlineReduction {
  double deadline = 0.0;           // T*_hj
  std::vector<double> delays;      // updated D for the state's flows (others unchanged)
  double lower_limit = 0.0;        // max(T+_hj, 0) clipped to T_hj
};

// Smallest class deadline in [T+_hj, T_hj] keeping S_hj(t) <= C t at the
// inflection points, with member delays extended to min(a_i - T, b_i / r_i)
// where a_i = local_deadline_i + D_i is each member's combined budget.
DeadlineReduction reduce_class_deadline(const LinkClassState& state, int h, double link_rate);

struct ReductionRecord {
  int link = 0;
  int cls = 1;
  double before = 0.0;  // running C*_j before the reduction
  double after = 0.0;   // max(sum r, C*_1j..C*_hj) recomputed after it
};

struct AdjustmentOptions {
  double epsilon = 1e-3;
  int max_iterations = 100;
  bool record_reductions = false;
};

struct AdjustmentResult {
  double total = 0.0;
  SpSolution solution;
  double initial_total = 0.0;          // the starting point, evaluated like sp_fs/sp_ns
  double first_iteration_total = 0.0;
  std::vector<double> iteration_totals;
  std::vector<ReductionRecord> reductions;  // filled when record_reductions
  double worst_reduction_excess = 0.0;      // max (after - before) / before
};

AdjustmentResult adjustment(const Scenario& s, const Eigen::VectorXd& D, const LocalDeadlines& local,
                            const AdjustmentOptions& options = {});

struct GammaSchedule {
  std::vector<double> grid = default_grid();
  int depth = 2;
  int refine_points = 5;

  static std::vector<double> default_grid();  // 0, 0.1, ..., 1
};

struct GreedyResult {
  SpSolution solution;
  double gamma = 0.0;
  std::map<double, double> explored;  // gamma -> adjusted total
  double worst_reduction_excess = 0.0;
  bool running_minimum_held = true;   // every run's total <= its first iteration
};

GreedyResult greedy_reprofiling(const Scenario& s, const GammaSchedule& schedule = {}, double epsilon = 1e-3);

struct ShapingRatio {
  int cls = 1;
  double ratio = 0.0;
  double weight = 0.0;
};

std::vector<ShapingRatio> shaping_ratio_report(const Scenario& s, const SpSolution& sol);

}  // namespace reprofile::sp
