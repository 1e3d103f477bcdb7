#include <doctest.h>

#include <set>

#include "reprofile/io.hpp"
#include "reprofile/scenarios.hpp"

using namespace reprofile;
using namespace reprofile::scenarios;

namespace {

std::filesystem::path data_dir() { return REPROFILE_DATA_DIR; }

}  // namespace

TEST_CASE("traffic models") {
  auto deadlines = [](const TrafficModel& m) {
    std::vector<double> d;
    for (const auto& c : m.classes) d.push_back(c.deadline);
    return d;
  };
  CHECK(deadlines(TrafficModel::tsn()) == std::vector<double>{0.1e-3, 2e-3, 50e-3});
  CHECK(deadlines(TrafficModel::inter_dc()) == std::vector<double>{10e-3, 50e-3, 200e-3});
  CHECK(deadlines(TrafficModel::synthetic()) == std::vector<double>{10e-3, 25e-3, 50e-3, 100e-3});
  for (const auto& c : TrafficModel::synthetic().classes) {
    CHECK(c.rate.lo == 1.0);
    CHECK(c.rate.hi == 100.0);
    CHECK(c.burst.lo == 1.0);
    CHECK(c.burst.hi == 100.0);
  }
  CHECK(model_kind_from_string("interdc") == ModelKind::InterDc);
  CHECK(to_string(ModelKind::Tsn) == "tsn");
  CHECK_THROWS(model_kind_from_string("lte"));

  for (const char* name : {"tsn", "interdc", "synthetic"}) {
    const TrafficModel file = io::read_model(data_dir() / "models" / (std::string(name) + ".json"));
    const TrafficModel built = TrafficModel::of(model_kind_from_string(name));
    CHECK(deadlines(file) == deadlines(built));
  }
}

TEST_CASE("flow sampling") {
  const std::vector<std::vector<int>> shared{{0}};
  const auto tsn = sample_flows(TrafficModel::tsn(), 3, shared, 1);
  REQUIRE(tsn.size() == 3);
  for (const auto& f : tsn) {
    CHECK((f.deadline == 0.1e-3 || f.deadline == 2e-3 || f.deadline == 50e-3));
    CHECK(f.path == std::vector<int>{0});
  }
  CHECK(sample_flows(TrafficModel::tsn(), 0, shared, 1).empty());

  const auto many = sample_flows(TrafficModel::synthetic(), 10000, shared, 2);
  double rate = 0.0;
  std::set<double> seen;
  for (const auto& f : many) {
    rate += f.profile.rate / 10000.0;
    seen.insert(f.deadline);
    CHECK((f.profile.burst >= 1.0 && f.profile.burst <= 100.0));
  }
  CHECK(rate >= 49.0);
  CHECK(rate <= 52.0);
  CHECK(seen.size() == 4);

  const std::vector<std::vector<int>> per_flow{{0}, {1, 2}};
  const auto two = sample_flows(TrafficModel::inter_dc(), 2, per_flow, 3, 10);
  CHECK(two[1].path == std::vector<int>{1, 2});
  CHECK(two[0].id == 10);
}

TEST_CASE("parking lot") {
  const Scenario s = gen_parking_lot(2, 3, 1, TrafficModel::synthetic(), 1);
  CHECK(s.flows.size() == 5);
  CHECK(s.link_count() == 3);
  CHECK(flows_on_link(s, 1).size() == 3);
  CHECK(s.flows[0].path == std::vector<int>{0, 1, 2});
  CHECK(s.topology.links[2].name == "l2");

  CHECK(gen_parking_lot(0, 1, 0, TrafficModel::tsn(), 1).flows.empty());
  CHECK(gen_parking_lot(3, 2, std::nullopt, TrafficModel::tsn(), 1).flows.size() == 3 + 2 * 3);

  const Scenario again = gen_parking_lot(2, 3, 1, TrafficModel::synthetic(), 1);
  CHECK(io::dump(io::scenario_to_json(s)) == io::dump(io::scenario_to_json(again)));
  CHECK(io::dump(io::scenario_to_json(s)) !=
        io::dump(io::scenario_to_json(gen_parking_lot(2, 3, 1, TrafficModel::synthetic(), 2))));
}

TEST_CASE("deadline scaling") {
  const Scenario s = gen_parking_lot(3, 2, 1, TrafficModel::inter_dc(), 4);
  const std::string base = io::dump(io::scenario_to_json(s));
  CHECK(io::dump(io::scenario_to_json(scale_deadlines(s, 1.0))) == base);
  const Scenario twice = scale_deadlines(s, 2.0);
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    CHECK(twice.flows[i].deadline == 2.0 * s.flows[i].deadline);
    CHECK(twice.flows[i].profile.rate == s.flows[i].profile.rate);
  }
  CHECK(io::dump(io::scenario_to_json(scale_deadlines(scale_deadlines(s, 0.5), 2.0))) == base);

  Scenario ten = s;
  ten.flows[0].deadline = 10e-3;
  CHECK(scale_deadlines(ten, 2.0).flows[0].deadline == doctest::Approx(20e-3));
}

TEST_CASE("graphs") {
  Graph g;
  g.nodes = 4;
  g.edges = {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {3, 0}};
  CHECK(shortest_path(g, 0, 3) == std::vector<int>{3});
  CHECK(shortest_path(g, 1, 0) == std::vector<int>{1, 2, 4});
  CHECK(shortest_path(g, 2, 2).empty());
  g.edges.pop_back();
  CHECK(shortest_path(g, 1, 0).empty());

  for (const char* name : {"orion_cev", "us_topo"}) {
    const Graph topo = io::read_graph(data_dir() / "topologies" / (std::string(name) + ".json"));
    const auto paths = sample_paths(topo, 40, 5);
    CHECK(paths.size() == 40);
    for (const auto& p : paths) CHECK(!p.empty());
    const Scenario s = graph_scenario(topo, TrafficModel::tsn(), 40, 5);
    CHECK(s.link_count() == topo.edges.size());
    CHECK(!validate(s).has_value());
  }
}

TEST_CASE("property: generated scenarios validate and are pure in the seed") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto kind = static_cast<ModelKind>(seed % 3);
    const Scenario s = gen_parking_lot(seed % 7, 1 + seed % 4, seed % 3, TrafficModel::of(kind), seed,
                                       Scheduler::static_priority(1 + static_cast<int>(seed % 5)));
    CHECK(!validate(s).has_value());
    const Scenario t = gen_parking_lot(seed % 7, 1 + seed % 4, seed % 3, TrafficModel::of(kind), seed,
                                       Scheduler::static_priority(1 + static_cast<int>(seed % 5)));
    CHECK(io::dump(io::scenario_to_json(s)) == io::dump(io::scenario_to_json(t)));
  }
}
