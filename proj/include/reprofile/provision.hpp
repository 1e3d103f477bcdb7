#pragma once

// Per-link bandwidth mathematics for static-priority (and FIFO, k = 1) hops:
// minimal service functions, class and link minimum bandwidth, inflection
// points and slacks.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "reprofile/curves.hpp"

namespace reprofile {

// Priority classes are numbered 1 (highest) to classes (lowest).
struct PriorityAssignment {
  int classes = 1;
  std::vector<int> class_of;  // aligned with the link's flow list

  std::vector<std::size_t> members(int h) const;
  bool is_partition() const;
};

struct LinkFlow {
  int id = 0;
  TokenBucketProfile profile;
  double shaping_delay = 0.0;   // D_i
  int priority = 1;             // class at this link
  double local_deadline = 0.0;  // per-flow allowance at this link; read by the reduction step
};

struct LinkClassState {
  int link = 0;
  int classes = 1;
  std::vector<LinkFlow> flows;
  std::vector<double> class_deadlines;  // T_hj, index h - 1

  double deadline(int h) const { return class_deadlines.at(static_cast<std::size_t>(h - 1)); }
  PriorityAssignment assignment() const;
  bool class_empty(int h) const;
};

// S(t) = 0 for t <= origin and shape(t - origin) for t > origin.
struct ServiceFunction {
  double origin = 0.0;
  ConcaveCurve shape;

  double operator()(double t) const { return t <= origin ? 0.0 : shape(t - origin); }
  double right_limit(double t) const { return t < origin ? 0.0 : shape.right_limit(t - origin); }
};

struct InflectionPoint {
  double t = 0.0;
  int cls = 1;
  bool first_point = false;
  std::vector<int> own_flows;     // flows of class cls with t = T + D
  std::vector<int> higher_flows;  // higher-class flows with t = D > T
  double slack = 0.0;

  // Points contributed by a flow's rate change stay put while T shrinks.
  bool stationary() const { return !own_flows.empty() || !higher_flows.empty(); }
};

struct ClassBandwidth {
  int cls = 1;
  double rate = 0.0;  // kInfinity when T = 0 meets a jump at 0+
  InflectionPoint witness;
  bool empty = false;

  bool infinite() const { return rate == kInfinity; }
};

struct LinkBandwidth {
  double rate = 0.0;
  double stability = 0.0;  // sum of r over the link
  std::vector<ClassBandwidth> per_class;

  bool infinite() const { return rate == kInfinity; }
};

class ProvisioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sum of 2SRC curves of the given class (or of all classes < h with higher_than).
ConcaveCurve class_arrival(const LinkClassState& state, int h);
ConcaveCurve higher_priority_arrival(const LinkClassState& state, int h);

ServiceFunction minimal_service_function(const LinkClassState& state, int h);

std::vector<InflectionPoint> inflection_points(const LinkClassState& state, int h);

ClassBandwidth class_bandwidth(const LinkClassState& state, int h);

LinkBandwidth link_bandwidth(const LinkClassState& state);

// Slack C t - S(t+) at every inflection point of class h. Throws
// ProvisioningError when a slack is negative beyond tolerance.
std::vector<InflectionPoint> slacks(const LinkClassState& state, int h, double link_rate);

// Largest t with higher-priority arrivals H(t) >= C t (0 without higher classes).
double higher_priority_crossing(const LinkClassState& state, int h, double link_rate);

}  // namespace reprofile
