#include "reprofile/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace reprofile {

double FlowSpec::max_shaping_delay() const {
  return std::min(deadline, profile.burst / profile.rate);
}

double max_shaping_delay(const FlowSpec& f) { return f.max_shaping_delay(); }

std::optional<Diagnostic> validate(const Scenario& s) {
  const int n = static_cast<int>(s.topology.size());
  for (int j = 0; j < n; ++j) {
    const Link& l = s.topology.links[j];
    if (l.id != j) {
      return Diagnostic{"link-id-order", "link ids must be 0..n-1 in order", std::nullopt, l.id};
    }
    if (l.propagation != 0.0) {
      return Diagnostic{"nonzero-propagation", "propagation delay must be 0", std::nullopt, l.id};
    }
  }
  if (s.scheduler.kind == SchedulerKind::StaticPriority && s.scheduler.classes < 1) {
    return Diagnostic{"bad-class-count", "static priority needs at least one class", std::nullopt,
                      std::nullopt};
  }

  std::set<int> ids;
  for (const FlowSpec& f : s.flows) {
    if (!ids.insert(f.id).second) {
      return Diagnostic{"duplicate-flow-id", "flow id used twice", f.id, std::nullopt};
    }
    if (!(f.profile.rate > 0.0) || !std::isfinite(f.profile.rate)) {
      return Diagnostic{"nonpositive-rate", "flow rate must be positive", f.id, std::nullopt};
    }
    if (!(f.profile.burst > 0.0) || !std::isfinite(f.profile.burst)) {
      return Diagnostic{"nonpositive-burst", "flow burst must be positive", f.id, std::nullopt};
    }
    if (!(f.deadline > 0.0) || !std::isfinite(f.deadline)) {
      return Diagnostic{"nonpositive-deadline", "flow deadline must be positive", f.id,
                        std::nullopt};
    }
    if (f.path.empty()) {
      return Diagnostic{"empty-path", "flow path must not be empty", f.id, std::nullopt};
    }
    std::set<int> seen;
    for (int j : f.path) {
      if (j < 0 || j >= n) {
        return Diagnostic{"unknown-link", "path references unknown link", f.id, j};
      }
      if (!seen.insert(j).second) {
        return Diagnostic{"repeated-link", "path visits a link twice", f.id, j};
      }
    }
  }
  return std::nullopt;
}

std::vector<int> flows_on_link(const Scenario& s, int link) {
  if (link < 0 || link >= static_cast<int>(s.topology.size())) {
    throw std::out_of_range("unknown link id " + std::to_string(link));
  }
  std::vector<int> out;
  for (const FlowSpec& f : s.flows) {
    if (std::find(f.path.begin(), f.path.end(), link) != f.path.end()) out.push_back(f.id);
  }
  return out;
}

std::vector<std::vector<std::size_t>> flows_by_link(const Scenario& s) {
  std::vector<std::vector<std::size_t>> out(s.topology.size());
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    for (int j : s.flows[i].path) out.at(static_cast<std::size_t>(j)).push_back(i);
  }
  return out;
}

}  // namespace reprofile
