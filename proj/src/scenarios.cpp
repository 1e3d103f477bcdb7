#include "reprofile/scenarios.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "reprofile/io.hpp"
#include "reprofile/random.hpp"

namespace reprofile::scenarios {

namespace {

TrafficModel uniform_model(ModelKind kind, std::initializer_list<std::pair<const char*, double>> classes) {
  TrafficModel m;
  m.kind = kind;
  for (const auto& [name, ms] : classes) m.classes.push_back({name, {1.0, 100.0}, {1.0, 100.0}, ms / 1000.0});
  return m;
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Tsn: return "tsn";
    case ModelKind::InterDc: return "interdc";
    case ModelKind::Synthetic: return "synthetic";
  }
  return "synthetic";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "tsn") return ModelKind::Tsn;
  if (name == "interdc") return ModelKind::InterDc;
  if (name == "synthetic") return ModelKind::Synthetic;
  throw std::invalid_argument("unknown traffic model '" + name + "'");
}

TrafficModel TrafficModel::tsn() {
  return uniform_model(ModelKind::Tsn, {{"control", 0.1}, {"audio-video", 2.0}, {"best-effort", 50.0}});
}

TrafficModel TrafficModel::inter_dc() {
  return uniform_model(ModelKind::InterDc, {{"interactive", 10.0}, {"elastic", 50.0}, {"background", 200.0}});
}

TrafficModel TrafficModel::synthetic() {
  return uniform_model(ModelKind::Synthetic, {{"d10", 10.0}, {"d25", 25.0}, {"d50", 50.0}, {"d100", 100.0}});
}

TrafficModel TrafficModel::of(ModelKind kind) {
  switch (kind) {
    case ModelKind::Tsn: return tsn();
    case ModelKind::InterDc: return inter_dc();
    case ModelKind::Synthetic: return synthetic();
  }
  return synthetic();
}

std::vector<FlowSpec> sample_flows(const TrafficModel& model, std::size_t count,
                                   std::span<const std::vector<int>> paths, std::uint64_t seed, int first_id) {
  if (count > 0 && model.classes.empty()) throw std::invalid_argument("traffic model has no classes");
  if (count > 0 && paths.size() != count && paths.size() != 1)
    throw std::invalid_argument("sample_flows needs one path per flow or a single shared path");
  Rng rng(seed);
  std::vector<FlowSpec> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const TrafficClass& c = model.classes[rng.index(model.classes.size())];
    const double r = rng.uniform(c.rate.lo, c.rate.hi);
    const double b = rng.uniform(c.burst.lo, c.burst.hi);
    FlowSpec f;
    f.id = first_id + static_cast<int>(k);
    f.profile = TokenBucketProfile(r, b);
    f.deadline = c.deadline;
    f.path = paths.size() == 1 ? paths[0] : paths[k];
    out.push_back(std::move(f));
  }
  return out;
}

Scenario gen_parking_lot(std::size_t m, std::size_t n, std::optional<std::size_t> cross_per_link,
                         const TrafficModel& model, std::uint64_t seed, Scheduler scheduler) {
  if (n < 1) throw std::invalid_argument("parking lot needs at least one link");
  Scenario s;
  s.scheduler = scheduler;
  for (std::size_t j = 0; j < n; ++j) s.topology.links.push_back({static_cast<int>(j), "l" + std::to_string(j), 0.0});

  const std::size_t cross = cross_per_link.value_or(m);
  std::vector<std::vector<int>> paths;
  std::vector<int> main_path(n);
  for (std::size_t j = 0; j < n; ++j) main_path[j] = static_cast<int>(j);
  paths.insert(paths.end(), m, main_path);
  for (std::size_t j = 0; j < n; ++j) paths.insert(paths.end(), cross, std::vector<int>{static_cast<int>(j)});
  s.flows = sample_flows(model, paths.size(), paths, seed);
  return s;
}

Scenario scale_deadlines(const Scenario& s, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("scaling factor must be positive");
  Scenario out = s;
  // Scaled in milliseconds so the result stays exactly representable in scenario files.
  for (FlowSpec& f : out.flows) f.deadline = io::ms_to_seconds(io::seconds_to_ms(f.deadline) * omega);
  return out;
}

std::vector<int> shortest_path(const Graph& g, int src, int dst) {
  if (src == dst || src < 0 || dst < 0 || src >= g.nodes || dst >= g.nodes) return {};
  std::vector<std::vector<int>> out_edges(static_cast<std::size_t>(g.nodes));
  for (std::size_t e = 0; e < g.edges.size(); ++e) out_edges[static_cast<std::size_t>(g.edges[e].first)].push_back(static_cast<int>(e));
  std::vector<int> via(static_cast<std::size_t>(g.nodes), -1);
  std::vector<bool> seen(static_cast<std::size_t>(g.nodes), false);
  std::deque<int> queue{src};
  seen[static_cast<std::size_t>(src)] = true;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (u == dst) break;
    for (int e : out_edges[static_cast<std::size_t>(u)]) {
      const int v = g.edges[static_cast<std::size_t>(e)].second;
      if (seen[static_cast<std::size_t>(v)]) continue;
      seen[static_cast<std::size_t>(v)] = true;
      via[static_cast<std::size_t>(v)] = e;
      queue.push_back(v);
    }
  }
  if (!seen[static_cast<std::size_t>(dst)]) return {};
  std::vector<int> path;
  for (int v = dst; v != src;) {
    const int e = via[static_cast<std::size_t>(v)];
    path.push_back(e);
    v = g.edges[static_cast<std::size_t>(e)].first;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<std::vector<int>> sample_paths(const Graph& g, std::size_t count, std::uint64_t seed) {
  if (g.nodes < 2) throw std::invalid_argument("graph needs at least two nodes");
  Rng rng(seed);
  std::vector<std::vector<int>> out;
  std::size_t misses = 0;
  while (out.size() < count) {
    const int a = static_cast<int>(rng.index(static_cast<std::uint64_t>(g.nodes)));
    const int b = static_cast<int>(rng.index(static_cast<std::uint64_t>(g.nodes)));
    std::vector<int> p = shortest_path(g, a, b);
    if (p.empty()) {
      if (++misses > 1000 * (count + 1)) throw std::invalid_argument("graph has too few routable pairs");
      continue;
    }
    out.push_back(std::move(p));
  }
  return out;
}

Scenario graph_scenario(const Graph& g, const TrafficModel& model, std::size_t count, std::uint64_t seed,
                        Scheduler scheduler) {
  Scenario s;
  s.scheduler = scheduler;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    s.topology.links.push_back({static_cast<int>(e),
                                std::to_string(g.edges[e].first) + "-" + std::to_string(g.edges[e].second), 0.0});
  }
  // Separate streams for routing and profiles keep each reproducible on its own.
  const auto paths = sample_paths(g, count, seed);
  s.flows = sample_flows(model, count, paths, seed ^ 0x9e3779b97f4a7c15ULL);
  return s;
}

}  // namespace reprofile::scenarios
