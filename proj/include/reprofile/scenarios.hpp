#pragma once

// Scenario generators: traffic models, parking-lot topologies, graph
// topologies with shortest-path routing, deadline scaling.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reprofile/network.hpp"

namespace reprofile::scenarios {

enum class ModelKind { Tsn, InterDc, Synthetic };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);  // tsn | interdc | synthetic

struct UniformRange {
  double lo = 1.0;
  double hi = 100.0;
};

struct TrafficClass {
  std::string name;
  UniformRange rate;   // Mb/s
  UniformRange burst;  // Mb
  double deadline = 0.0;  // seconds
};

struct TrafficModel {
  ModelKind kind = ModelKind::Synthetic;
  std::vector<TrafficClass> classes;

  // Deadlines 0.1 / 2 / 50 ms; rates and bursts U[1, 100].
  static TrafficModel tsn();
  // Deadlines 10 / 50 / 200 ms.
  static TrafficModel inter_dc();
  // Deadlines 10 / 25 / 50 / 100 ms.
  static TrafficModel synthetic();
  static TrafficModel of(ModelKind kind);
};

// One flow per path (or `count` flows sharing paths[0] when one path is given).
// Class uniform over the model's classes, then rate, then burst.
std::vector<FlowSpec> sample_flows(const TrafficModel& model, std::size_t count,
                                   std::span<const std::vector<int>> paths, std::uint64_t seed,
                                   int first_id = 0);

// m main flows over links 0..n-1, then cross_per_link single-hop flows on each
// link (default m). Main flows get ids 0..m-1, cross flows follow link by link.
Scenario gen_parking_lot(std::size_t m, std::size_t n, std::optional<std::size_t> cross_per_link,
                         const TrafficModel& model, std::uint64_t seed, Scheduler scheduler = Scheduler::fifo());

Scenario scale_deadlines(const Scenario& s, double omega);

// Directed graph whose edges become links (edge index = link id).
struct Graph {
  std::string name;
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;
};

// Fewest-hop route as link ids; empty when unreachable or src == dst.
std::vector<int> shortest_path(const Graph& g, int src, int dst);

// Random distinct (src, dst) pairs with a route, routed by shortest_path.
std::vector<std::vector<int>> sample_paths(const Graph& g, std::size_t count, std::uint64_t seed);

Scenario graph_scenario(const Graph& g, const TrafficModel& model, std::size_t count, std::uint64_t seed,
                        Scheduler scheduler = Scheduler::fifo());

}  // namespace reprofile::scenarios
