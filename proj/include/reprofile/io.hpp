#pragma once

// JSON formats. Scenario files use milliseconds and megabits; everything in
// memory is seconds and megabits.

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "reprofile/network.hpp"
#include "reprofile/scenarios.hpp"
#include "reprofile/solution.hpp"

namespace reprofile::io {

// Malformed document: bad JSON, wrong types, missing or unknown keys.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Milliseconds for a value in seconds such that ms / 1000 reproduces it exactly.
double seconds_to_ms(double seconds);
inline double ms_to_seconds(double ms) { return ms / 1000.0; }

nlohmann::ordered_json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);
Scenario read_scenario(const std::filesystem::path& path);
void write_scenario(const std::filesystem::path& path, const Scenario& s);

nlohmann::ordered_json model_to_json(const scenarios::TrafficModel& m);
scenarios::TrafficModel model_from_json(const nlohmann::json& j);
scenarios::TrafficModel read_model(const std::filesystem::path& path);

scenarios::Graph graph_from_json(const nlohmann::json& j);
scenarios::Graph read_graph(const std::filesystem::path& path);

struct ResultMeta {
  bool feasible = true;
  double runtime_ms = 0.0;
};

nlohmann::ordered_json solution_to_json(const Scenario& s, const NetworkSolution& sol, const ResultMeta& meta);

// Pretty JSON text with a trailing newline.
std::string dump(const nlohmann::ordered_json& j);

}  // namespace reprofile::io
