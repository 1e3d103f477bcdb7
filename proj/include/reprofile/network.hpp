#pragma once

// Flow, link and scenario data model. Times in seconds, data in megabits.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "reprofile/curves.hpp"

namespace reprofile {

struct FlowSpec {
  int id = 0;
  TokenBucketProfile profile;
  double deadline = 0.0;   // end-to-end, seconds
  std::vector<int> path;   // link ids in traversal order

  // min(d, b / r)
  double max_shaping_delay() const;
};

double max_shaping_delay(const FlowSpec& f);

struct Link {
  int id = 0;
  std::string name;
  double propagation = 0.0;  // seconds; must be 0 (fluid model)
};

struct Topology {
  std::vector<Link> links;  // links[j].id == j
  std::size_t size() const { return links.size(); }
};

enum class SchedulerKind { Fifo, StaticPriority };

struct Scheduler {
  SchedulerKind kind = SchedulerKind::Fifo;
  int classes = 1;

  // FIFO behaves as a single-class static-priority scheduler.
  int class_count() const { return kind == SchedulerKind::Fifo ? 1 : classes; }
  static Scheduler fifo() { return {SchedulerKind::Fifo, 1}; }
  static Scheduler static_priority(int k) { return {SchedulerKind::StaticPriority, k}; }
};

struct Scenario {
  Topology topology;
  std::vector<FlowSpec> flows;
  Scheduler scheduler;

  std::size_t link_count() const { return topology.size(); }
  std::size_t flow_count() const { return flows.size(); }
};

struct Diagnostic {
  std::string code;  // e.g. "nonpositive-deadline", "unknown-link"
  std::string message;
  std::optional<int> flow;
  std::optional<int> link;
};

// First invariant violation, or nullopt when the scenario is valid.
std::optional<Diagnostic> validate(const Scenario& s);

// Ids of flows whose path includes link j, in scenario order.
// Throws std::out_of_range for an unknown link.
std::vector<int> flows_on_link(const Scenario& s, int link);

// Flow positions (indices into s.flows) on every link.
std::vector<std::vector<std::size_t>> flows_by_link(const Scenario& s);

}  // namespace reprofile
