#include "reprofile/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace reprofile::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void expect_keys(const json& j, const std::string& where, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw FormatError(where + ": expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!j.contains(k)) throw FormatError(where + ": missing key '" + k + "'");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw FormatError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw FormatError(where + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw FormatError(where + ": expected an integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw FormatError(where + ": expected a string");
  return j.get<std::string>();
}

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// Infinite values are written as null.
ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

}  // namespace

double seconds_to_ms(double seconds) {
  if (!std::isfinite(seconds)) return seconds * 1000.0;
  double ms = seconds * 1000.0;
  for (int step = 0; step < 8 && ms / 1000.0 != seconds; ++step) {
    ms = std::nextafter(ms, ms / 1000.0 < seconds ? INFINITY : -INFINITY);
  }
  return ms;
}

ordered_json scenario_to_json(const Scenario& s) {
  ordered_json out;
  out["links"] = ordered_json::array();
  for (const Link& l : s.topology.links) {
    ordered_json link{{"id", l.id}};
    if (!l.name.empty()) link["name"] = l.name;
    if (l.propagation != 0.0) link["propagation_ms"] = seconds_to_ms(l.propagation);
    out["links"].push_back(std::move(link));
  }
  ordered_json sched;
  if (s.scheduler.kind == SchedulerKind::Fifo) {
    sched["type"] = "fifo";
  } else {
    sched["type"] = "sp";
    sched["classes"] = s.scheduler.classes;
  }
  out["scheduler"] = std::move(sched);
  out["flows"] = ordered_json::array();
  for (const FlowSpec& f : s.flows) {
    out["flows"].push_back({{"id", f.id},
                            {"rate_mbps", f.profile.rate},
                            {"burst_mb", f.profile.burst},
                            {"deadline_ms", seconds_to_ms(f.deadline)},
                            {"path", f.path}});
  }
  return out;
}

Scenario scenario_from_json(const json& j) {
  expect_keys(j, "scenario", {"links", "scheduler", "flows"});
  Scenario s;
  if (!j["links"].is_array()) throw FormatError("links: expected an array");
  for (std::size_t k = 0; k < j["links"].size(); ++k) {
    const json& l = j["links"][k];
    const std::string where = "links[" + std::to_string(k) + "]";
    expect_keys(l, where, {"id"}, {"name", "propagation_ms"});
    Link link;
    link.id = integer(l["id"], where + ".id");
    if (l.contains("name")) link.name = text(l["name"], where + ".name");
    if (l.contains("propagation_ms")) link.propagation = ms_to_seconds(number(l["propagation_ms"], where + ".propagation_ms"));
    s.topology.links.push_back(std::move(link));
  }

  const json& sc = j["scheduler"];
  expect_keys(sc, "scheduler", {"type"}, {"classes"});
  const std::string type = text(sc["type"], "scheduler.type");
  if (type == "fifo") {
    s.scheduler = Scheduler::fifo();
    if (sc.contains("classes") && integer(sc["classes"], "scheduler.classes") != 1)
      throw FormatError("scheduler.classes: FIFO has exactly one class");
  } else if (type == "sp") {
    s.scheduler = Scheduler::static_priority(sc.contains("classes") ? integer(sc["classes"], "scheduler.classes") : 1);
  } else {
    throw FormatError("scheduler.type: expected \"fifo\" or \"sp\"");
  }

  if (!j["flows"].is_array()) throw FormatError("flows: expected an array");
  for (std::size_t k = 0; k < j["flows"].size(); ++k) {
    const json& f = j["flows"][k];
    const std::string where = "flows[" + std::to_string(k) + "]";
    expect_keys(f, where, {"id", "rate_mbps", "burst_mb", "deadline_ms", "path"});
    FlowSpec flow;
    flow.id = integer(f["id"], where + ".id");
    // Assigned field by field so validate() can report bad values as diagnostics.
    flow.profile.rate = number(f["rate_mbps"], where + ".rate_mbps");
    flow.profile.burst = number(f["burst_mb"], where + ".burst_mb");
    flow.deadline = ms_to_seconds(number(f["deadline_ms"], where + ".deadline_ms"));
    if (!f["path"].is_array()) throw FormatError(where + ".path: expected an array");
    for (const json& hop : f["path"]) flow.path.push_back(integer(hop, where + ".path"));
    s.flows.push_back(std::move(flow));
  }
  return s;
}

Scenario read_scenario(const std::filesystem::path& path) { return scenario_from_json(parse_file(path)); }

void write_scenario(const std::filesystem::path& path, const Scenario& s) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << dump(scenario_to_json(s));
}

ordered_json model_to_json(const scenarios::TrafficModel& m) {
  ordered_json out;
  out["kind"] = scenarios::to_string(m.kind);
  out["classes"] = ordered_json::array();
  for (const auto& c : m.classes) {
    out["classes"].push_back({{"name", c.name},
                              {"rate_mbps", {c.rate.lo, c.rate.hi}},
                              {"burst_mb", {c.burst.lo, c.burst.hi}},
                              {"deadline_ms", seconds_to_ms(c.deadline)}});
  }
  return out;
}

scenarios::TrafficModel model_from_json(const json& j) {
  expect_keys(j, "model", {"kind", "classes"});
  scenarios::TrafficModel m;
  try {
    m.kind = scenarios::model_kind_from_string(text(j["kind"], "model.kind"));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("model.kind: ") + e.what());
  }
  if (!j["classes"].is_array() || j["classes"].empty()) throw FormatError("model.classes: expected a non-empty array");
  auto range = [](const json& r, const std::string& where) {
    if (!r.is_array() || r.size() != 2) throw FormatError(where + ": expected [lo, hi]");
    scenarios::UniformRange u{number(r[0], where), number(r[1], where)};
    if (!(u.lo > 0.0) || u.hi < u.lo) throw FormatError(where + ": need 0 < lo <= hi");
    return u;
  };
  for (std::size_t k = 0; k < j["classes"].size(); ++k) {
    const json& c = j["classes"][k];
    const std::string where = "model.classes[" + std::to_string(k) + "]";
    expect_keys(c, where, {"rate_mbps", "burst_mb", "deadline_ms"}, {"name"});
    scenarios::TrafficClass tc;
    if (c.contains("name")) tc.name = text(c["name"], where + ".name");
    tc.rate = range(c["rate_mbps"], where + ".rate_mbps");
    tc.burst = range(c["burst_mb"], where + ".burst_mb");
    tc.deadline = ms_to_seconds(number(c["deadline_ms"], where + ".deadline_ms"));
    if (!(tc.deadline > 0.0)) throw FormatError(where + ".deadline_ms: must be positive");
    m.classes.push_back(std::move(tc));
  }
  return m;
}

scenarios::TrafficModel read_model(const std::filesystem::path& path) { return model_from_json(parse_file(path)); }

scenarios::Graph graph_from_json(const json& j) {
  expect_keys(j, "topology", {"nodes", "edges"}, {"name", "note"});
  scenarios::Graph g;
  if (j.contains("name")) g.name = text(j["name"], "topology.name");
  g.nodes = integer(j["nodes"], "topology.nodes");
  if (!j["edges"].is_array()) throw FormatError("topology.edges: expected an array");
  for (const json& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2) throw FormatError("topology.edges: expected [from, to] pairs");
    const int a = integer(e[0], "topology.edges");
    const int b = integer(e[1], "topology.edges");
    if (a < 0 || b < 0 || a >= g.nodes || b >= g.nodes || a == b) throw FormatError("topology.edges: bad endpoint");
    g.edges.emplace_back(a, b);
  }
  return g;
}

scenarios::Graph read_graph(const std::filesystem::path& path) { return graph_from_json(parse_file(path)); }

ordered_json solution_to_json(const Scenario& s, const NetworkSolution& sol, const ResultMeta& meta) {
  ordered_json out;
  out["strategy"] = sol.strategy;
  out["total_mbps"] = finite_or_null(sol.total);
  out["per_link"] = ordered_json::array();
  ordered_json T = ordered_json::object();
  for (const LinkPlan& plan : sol.links) {
    ordered_json link{{"id", plan.link}, {"c_mbps", finite_or_null(plan.bandwidth)}};
    link["per_class"] = ordered_json::array();
    if (!plan.flows.empty()) {
      const LinkBandwidth bw = link_bandwidth(make_link_state(s, plan, sol.shaping_delays));
      for (const ClassBandwidth& c : bw.per_class) {
        if (c.empty) continue;
        ordered_json members = ordered_json::array();
        for (std::size_t k = 0; k < plan.flows.size(); ++k) {
          if (plan.assignment.class_of[k] == c.cls) members.push_back(s.flows[plan.flows[k]].id);
        }
        link["per_class"].push_back({{"class", c.cls},
                                     {"t_ms", seconds_to_ms(plan.class_deadlines[static_cast<std::size_t>(c.cls - 1)])},
                                     {"c_mbps", finite_or_null(c.rate)},
                                     {"flows", std::move(members)}});
      }
    }
    out["per_link"].push_back(std::move(link));
    ordered_json per_class = ordered_json::array();
    for (double t : plan.class_deadlines) per_class.push_back(seconds_to_ms(t));
    T[std::to_string(plan.link)] = std::move(per_class);
  }
  ordered_json D = ordered_json::array();
  for (Eigen::Index i = 0; i < sol.shaping_delays.size(); ++i) D.push_back(seconds_to_ms(sol.shaping_delays[i]));
  out["D_ms"] = std::move(D);
  out["T_ms"] = std::move(T);
  out["feasible"] = meta.feasible;
  out["runtime_ms"] = meta.runtime_ms;
  return out;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace reprofile::io
