#include "reprofile/solution.hpp"

#include <algorithm>
#include <cmath>

namespace reprofile {

Eigen::VectorXd NetworkSolution::bandwidths() const {
  Eigen::VectorXd c(static_cast<Eigen::Index>(links.size()));
  for (std::size_t j = 0; j < links.size(); ++j) c[static_cast<Eigen::Index>(j)] = links[j].bandwidth;
  return c;
}

LinkClassState make_link_state(const Scenario& s, const LinkPlan& plan,
                               const Eigen::VectorXd& shaping_delays) {
  LinkClassState state;
  state.link = plan.link;
  state.classes = plan.assignment.classes;
  state.class_deadlines = plan.class_deadlines;
  state.class_deadlines.resize(static_cast<std::size_t>(state.classes), 0.0);
  state.flows.reserve(plan.flows.size());
  for (std::size_t k = 0; k < plan.flows.size(); ++k) {
    const FlowSpec& f = s.flows[plan.flows[k]];
    LinkFlow lf;
    lf.id = f.id;
    lf.profile = f.profile;
    lf.shaping_delay = shaping_delays[static_cast<Eigen::Index>(plan.flows[k])];
    lf.priority = plan.assignment.class_of.empty() ? 1 : plan.assignment.class_of[k];
    state.flows.push_back(lf);
  }
  return state;
}

void recompute_bandwidths(const Scenario& s, NetworkSolution& sol) {
  sol.total = 0.0;
  for (LinkPlan& plan : sol.links) {
    plan.bandwidth = plan.flows.empty() ? 0.0
                                        : link_bandwidth(make_link_state(s, plan, sol.shaping_delays)).rate;
    sol.total += plan.bandwidth;
  }
}

SolutionCheck check_solution(const Scenario& s, const NetworkSolution& sol) {
  SolutionCheck check;
  std::vector<double> used(s.flows.size(), 0.0);
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    const double d = sol.shaping_delays[static_cast<Eigen::Index>(i)];
    used[i] = d;
    if (d < -1e-12 || d > s.flows[i].profile.max_shaping_delay() * (1.0 + 1e-12)) check.feasible = false;
  }
  for (const LinkPlan& plan : sol.links) {
    LinkBandwidth bw;
    if (!plan.flows.empty()) bw = link_bandwidth(make_link_state(s, plan, sol.shaping_delays));
    for (std::size_t k = 0; k < plan.flows.size(); ++k) {
      const int h = plan.assignment.class_of.empty() ? 1 : plan.assignment.class_of[k];
      used[plan.flows[k]] += plan.class_deadlines.at(static_cast<std::size_t>(h - 1));
    }
    if (bw.rate == kInfinity || plan.bandwidth == kInfinity) {
      check.feasible = false;
    } else if (bw.rate > 0.0) {
      const double gap = std::abs(plan.bandwidth - bw.rate) / bw.rate;
      check.worst_bandwidth_gap = std::max(check.worst_bandwidth_gap, gap);
      if (plan.bandwidth < bw.rate * (1.0 - 1e-9)) check.feasible = false;
    }
    check.recomputed.push_back(std::move(bw));
  }
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    const double excess = used[i] - s.flows[i].deadline;
    check.worst_budget_excess = std::max(check.worst_budget_excess, excess);
    if (excess > 1e-9) check.feasible = false;
  }
  return check;
}

}  // namespace reprofile
