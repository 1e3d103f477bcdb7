#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "reprofile/fifo.hpp"
#include "reprofile/io.hpp"
#include "reprofile/scenarios.hpp"
#include "reprofile/staticprio.hpp"

using namespace reprofile;
using nlohmann::json;

namespace {

json one_flow() {
  return json::parse(R"({
    "links": [{"id": 0}],
    "scheduler": {"type": "fifo"},
    "flows": [{"id": 7, "rate_mbps": 1, "burst_mb": 2, "deadline_ms": 2000, "path": [0]}]
  })");
}

}  // namespace

TEST_CASE("unit conversion") {
  CHECK(io::ms_to_seconds(2000) == 2.0);
  // Every value read from a file (ms / 1000) converts back exactly. Arbitrary
  // doubles cannot all: in some binades ms doubles are sparser than seconds.
  Rng rng(61);
  int exact = 0;
  for (int k = 0; k < 10000; ++k) {
    const double s = io::ms_to_seconds(rng.uniform(0, 1) * std::pow(10.0, rng.uniform(-3, 6)));
    CHECK(io::ms_to_seconds(io::seconds_to_ms(s)) == s);
    const double any = rng.uniform(0, 1) * std::pow(10.0, rng.uniform(-6, 3));
    exact += io::ms_to_seconds(io::seconds_to_ms(any)) == any;
  }
  MESSAGE("arbitrary doubles representable in ms: " << exact << " / 10000");
}

TEST_CASE("scenario parsing") {
  const Scenario s = io::scenario_from_json(one_flow());
  REQUIRE(s.flows.size() == 1);
  CHECK(s.flows[0].id == 7);
  CHECK(s.flows[0].deadline == 2.0);
  CHECK(s.scheduler.kind == SchedulerKind::Fifo);

  json sp = one_flow();
  sp["scheduler"] = {{"type", "sp"}, {"classes", 4}};
  CHECK(io::scenario_from_json(sp).scheduler.classes == 4);

  auto rejects = [](json j) { CHECK_THROWS_AS(io::scenario_from_json(j), io::FormatError); };
  json bad = one_flow();
  bad["extra"] = 1;
  rejects(bad);
  bad = one_flow();
  bad["flows"][0]["color"] = "red";
  rejects(bad);
  bad = one_flow();
  bad["flows"][0].erase("path");
  rejects(bad);
  bad = one_flow();
  bad["flows"][0]["rate_mbps"] = "fast";
  rejects(bad);
  bad = one_flow();
  bad["scheduler"] = {{"type", "fifo"}, {"classes", 2}};
  rejects(bad);
  bad = one_flow();
  bad["scheduler"] = {{"type", "sced"}};
  rejects(bad);

  // Values out of range parse; validation reports them.
  bad = one_flow();
  bad["flows"][0]["burst_mb"] = -1;
  const Scenario neg = io::scenario_from_json(bad);
  REQUIRE(validate(neg).has_value());
  CHECK(validate(neg)->code == "nonpositive-burst");
}

TEST_CASE("property: scenario round trip is bit-identical") {
  const auto dir = std::filesystem::temp_directory_path() / "reprofile_io_test";
  std::filesystem::create_directories(dir);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Scenario s = scenarios::gen_parking_lot(1 + seed % 5, 1 + seed % 3, seed % 3,
                                            scenarios::TrafficModel::of(static_cast<scenarios::ModelKind>(seed % 3)),
                                            seed, Scheduler::static_priority(1 + static_cast<int>(seed % 4)));
    s = scenarios::scale_deadlines(s, 0.37 + 0.1 * static_cast<double>(seed));
    const auto path = dir / ("s" + std::to_string(seed) + ".json");
    io::write_scenario(path, s);
    const Scenario back = io::read_scenario(path);
    REQUIRE(back.flows.size() == s.flows.size());
    for (std::size_t i = 0; i < s.flows.size(); ++i) {
      CHECK(back.flows[i].profile.rate == s.flows[i].profile.rate);
      CHECK(back.flows[i].profile.burst == s.flows[i].profile.burst);
      CHECK(back.flows[i].deadline == s.flows[i].deadline);
      CHECK(back.flows[i].path == s.flows[i].path);
    }
    CHECK(back.scheduler.classes == s.scheduler.classes);
    CHECK(io::dump(io::scenario_to_json(back)) == io::dump(io::scenario_to_json(s)));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("model and graph files") {
  const json m = io::model_to_json(scenarios::TrafficModel::inter_dc());
  const scenarios::TrafficModel back = io::model_from_json(m);
  CHECK(back.kind == scenarios::ModelKind::InterDc);
  REQUIRE(back.classes.size() == 3);
  CHECK(back.classes[2].deadline == 0.2);

  json bad = m;
  bad["classes"][0]["shape"] = "pareto";
  CHECK_THROWS_AS(io::model_from_json(bad), io::FormatError);

  const scenarios::Graph g = io::graph_from_json(json::parse(R"({"nodes": 3, "edges": [[0, 1], [1, 2]], "note": "x"})"));
  CHECK(g.nodes == 3);
  CHECK(g.edges.size() == 2);
  CHECK_THROWS_AS(io::graph_from_json(json::parse(R"({"nodes": 2, "edges": [[0, 5]]})")), io::FormatError);
  CHECK_THROWS_AS(io::read_graph("/nonexistent/graph.json"), io::FormatError);
}

TEST_CASE("solution output") {
  const Scenario s = io::scenario_from_json(one_flow());
  const fifo::FifoSolution fs = fifo::fs_solve(s);
  const auto j = io::solution_to_json(s, fs.to_network(s), {true, 0.0});
  CHECK(j["strategy"] == "fs");
  CHECK(j["total_mbps"].get<double>() == doctest::Approx(1.0));
  CHECK(j["D_ms"][0].get<double>() == 2000.0);
  CHECK(j["T_ms"]["0"][0].get<double>() == 0.0);
  CHECK(j["per_link"][0]["per_class"][0]["flows"] == json::array({7}));
  CHECK(j["feasible"] == true);
  CHECK(j["runtime_ms"] == 0.0);

  std::vector<std::string> keys;
  for (const auto& [k, _] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"strategy", "total_mbps", "per_link", "D_ms", "T_ms", "feasible", "runtime_ms"});

  // Infinite bandwidth serializes as null.
  Scenario tight = s;
  tight.scheduler = Scheduler::static_priority(1);
  SpSolution inf = sp::sp_ns_solve(tight);
  inf.links[0].class_deadlines = {0.0};
  recompute_bandwidths(tight, inf);
  const auto ji = io::solution_to_json(tight, inf, {false, 0.0});
  CHECK(ji["total_mbps"].is_null());
  CHECK(ji["per_link"][0]["c_mbps"].is_null());
  CHECK(io::dump(ji).back() == '\n');
}
