#pragma once

// Brute-force references. Nothing here uses the curve algebra or the
// provisioning code: service is summed flow by flow and the sup of S(t)/t is
// taken on sampled time grids.

#include <Eigen/Dense>
#include <span>
#include <stdexcept>
#include <vector>

#include "reprofile/network.hpp"

namespace reprofile::oracle {

class OracleRefused : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Time grid for the sup of S(t)/t over (T, T + horizon]: a uniform grid,
// re-gridded around the best sample `zoom_levels` times. S is concave past T,
// so S(t)/t is unimodal and the zoom brackets its maximizer.
struct TimeGrid {
  int samples = 64;
  int zoom_levels = 6;
};

// sigma_i(t) of a token bucket reshaped with delay D; right-limit at t = 0.
double reshaped_arrival(double rate, double burst, double delay, double t);

struct OracleFlow {
  double rate = 0.0;
  double burst = 0.0;
  double delay = 0.0;
  int cls = 1;
};

// sup_{t > T} S(t) / t where S(t) = sum over higher classes sigma(t) + sum over
// class h sigma(t - T), together with max(sum r) — the link rate needed for
// class h. Returns +inf when S(T+) > 0 at T = 0.
double dense_class_rate(std::span<const OracleFlow> flows, int h, double T, const TimeGrid& grid = {});

// Minimum bandwidth of a link: max(sum r, max_h dense_class_rate).
double dense_link_rate(std::span<const OracleFlow> flows, std::span<const double> class_deadlines,
                       const TimeGrid& grid = {});

struct GridOptions {
  int resolution = 12;   // cells per decision variable in the coarse pass
  int refine_rounds = 12;
  int refine_cells = 4;  // +-cells around the incumbent in each refinement
  int keep = 3;          // coarse incumbents refined
  TimeGrid time;
};

struct GridResult {
  double total = 0.0;
  bool feasible = true;
  double infeasibility_gap = 0.0;  // seconds over budget of the best point when infeasible
  Eigen::VectorXd D;
  Eigen::VectorXd T;
};

// Exhaustive grid over D_i in [0, D-hat_i] and T_j >= 0 for MIN_FIFO.
// Requires at most 3 flows and 3 links.
GridResult grid_min_bandwidth_fifo(const Scenario& s, const GridOptions& options = {});

struct AssignmentResult {
  double best = 0.0;
  std::vector<int> best_assignment;   // class per flow; deadline-ordered preferred among ties
  double best_ordered = 0.0;          // best over deadline-ordered assignments
  std::vector<double> all;            // value per assignment, base-k little-endian index
};

// All k^m assignments of the given flows (fixed D, local deadlines), T_h = min
// member deadline, C via dense_link_rate. At most 6 flows and 3 classes.
AssignmentResult enumerate_assignments_min(std::span<const OracleFlow> flows,
                                           std::span<const double> local_deadlines, int k,
                                           const TimeGrid& grid = {});

// class(i) < class(i') only if deadline(i) < deadline(i').
bool deadline_ordered(std::span<const int> classes, std::span<const double> local_deadlines);

}  // namespace reprofile::oracle
