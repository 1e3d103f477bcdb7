#include "reprofile/staticprio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace reprofile::sp {

namespace {

struct Hop {
  std::size_t flow;  // position in s.flows
  std::size_t pos;   // index into the flow's path
};

std::vector<std::vector<Hop>> hops_by_link(const Scenario& s) {
  std::vector<std::vector<Hop>> out(s.link_count());
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    const auto& path = s.flows[i].path;
    for (std::size_t p = 0; p < path.size(); ++p) out[static_cast<std::size_t>(path[p])].push_back({i, p});
  }
  return out;
}

Eigen::VectorXd shaping_caps(const Scenario& s) {
  Eigen::VectorXd caps(static_cast<Eigen::Index>(s.flows.size()));
  for (std::size_t i = 0; i < s.flows.size(); ++i) caps[static_cast<Eigen::Index>(i)] = s.flows[i].max_shaping_delay();
  return caps;
}

// Links in decreasing order of how many distinct links their flows touch.
std::vector<int> processing_order(const Scenario& s, const std::vector<std::vector<Hop>>& hops) {
  std::vector<std::size_t> reach(s.link_count(), 0);
  for (std::size_t j = 0; j < s.link_count(); ++j) {
    std::set<int> links;
    for (const Hop& h : hops[j]) links.insert(s.flows[h.flow].path.begin(), s.flows[h.flow].path.end());
    reach[j] = links.size();
  }
  std::vector<int> order(s.link_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return reach[static_cast<std::size_t>(a)] > reach[static_cast<std::size_t>(b)];
  });
  return order;
}

bool service_fits(const ConcaveCurve& own, const ConcaveCurve& higher, double T, double C) {
  auto fits = [&](double t) {
    const double s = own.right_limit(t - T) + higher.right_limit(t);
    return s <= C * t * (1.0 + 1e-12) + 1e-15;
  };
  if (!fits(T)) return false;
  for (const auto& seg : own.segments()) {
    if (seg.start > 0.0 && !fits(T + seg.start)) return false;
  }
  for (const auto& seg : higher.segments()) {
    if (seg.start > T && !fits(seg.start)) return false;
  }
  return true;
}

}  // namespace

LocalDeadlines LocalDeadlines::even_split(const Scenario& s, const Eigen::VectorXd& D) {
  LocalDeadlines out;
  out.value.resize(s.flows.size());
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    const FlowSpec& f = s.flows[i];
    const double share = std::max(0.0, f.deadline - D[static_cast<Eigen::Index>(i)]) / static_cast<double>(f.path.size());
    out.value[i].assign(f.path.size(), share);
  }
  return out;
}

double LocalDeadlines::worst_budget_excess(const Scenario& s, const Eigen::VectorXd& D) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    const double used = D[static_cast<Eigen::Index>(i)] + std::accumulate(value[i].begin(), value[i].end(), 0.0);
    worst = std::max(worst, used - s.flows[i].deadline);
  }
  return worst;
}

PriorityAssignment kmeans_assign(std::span<const double> deadlines, int k) {
  PriorityAssignment out;
  out.classes = std::max(k, 1);
  out.class_of.assign(deadlines.size(), 1);
  if (deadlines.empty() || out.classes == 1) return out;

  std::vector<double> values(deadlines.begin(), deadlines.end());
  std::sort(values.begin(), values.end());
  std::vector<double> u;
  std::vector<double> w;
  for (double v : values) {
    if (!u.empty() && v == u.back()) {
      w.back() += 1.0;
    } else {
      u.push_back(v);
      w.push_back(1.0);
    }
  }
  const std::size_t q = u.size();
  const std::size_t c = std::min<std::size_t>(static_cast<std::size_t>(out.classes), q);

  // Prefix sums around the smallest value to limit cancellation.
  std::vector<double> sw(q + 1, 0.0), swx(q + 1, 0.0), swxx(q + 1, 0.0);
  for (std::size_t a = 0; a < q; ++a) {
    const double x = u[a] - u[0];
    sw[a + 1] = sw[a] + w[a];
    swx[a + 1] = swx[a] + w[a] * x;
    swxx[a + 1] = swxx[a] + w[a] * x * x;
  }
  auto cost = [&](std::size_t a, std::size_t b) {  // values a..b-1
    const double n = sw[b] - sw[a];
    const double s1 = swx[b] - swx[a];
    return std::max(0.0, (swxx[b] - swxx[a]) - s1 * s1 / n);
  };

  constexpr double kUnset = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best(c + 1, std::vector<double>(q + 1, kUnset));
  std::vector<std::vector<std::size_t>> cut(c + 1, std::vector<std::size_t>(q + 1, 0));
  best[0][0] = 0.0;
  for (std::size_t g = 1; g <= c; ++g) {
    for (std::size_t b = g; b <= q; ++b) {
      for (std::size_t a = g - 1; a < b; ++a) {
        if (best[g - 1][a] == kUnset) continue;
        const double v = best[g - 1][a] + cost(a, b);
        if (v < best[g][b]) {
          best[g][b] = v;
          cut[g][b] = a;
        }
      }
    }
  }
  std::vector<int> cluster(q, 1);
  std::size_t b = q;
  for (std::size_t g = c; g >= 1; --g) {
    const std::size_t a = cut[g][b];
    for (std::size_t l = a; l < b; ++l) cluster[l] = static_cast<int>(g);
    b = a;
  }
  for (std::size_t i = 0; i < deadlines.size(); ++i) {
    const auto it = std::lower_bound(u.begin(), u.end(), deadlines[i]);
    out.class_of[i] = cluster[static_cast<std::size_t>(std::distance(u.begin(), it))];
  }
  return out;
}

PriorityAssignment same_size_assign(std::span<const double> deadlines, int k) {
  PriorityAssignment out;
  out.classes = std::max(k, 1);
  out.class_of.assign(deadlines.size(), 1);
  std::vector<std::size_t> order(deadlines.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deadlines[a] < deadlines[b]; });
  const std::size_t p = deadlines.size();
  for (std::size_t rank = 0; rank < p; ++rank) {
    // Equal deadlines stay together in the class of the run's first member.
    const bool tie = rank > 0 && deadlines[order[rank]] == deadlines[order[rank - 1]];
    out.class_of[order[rank]] =
        tie ? out.class_of[order[rank - 1]] : 1 + static_cast<int>(rank * static_cast<std::size_t>(out.classes) / p);
  }
  return out;
}

PriorityAssignment uniform_assign(std::span<const double> deadlines, int k) {
  PriorityAssignment out;
  out.classes = std::max(k, 1);
  out.class_of.assign(deadlines.size(), 1);
  if (deadlines.empty()) return out;
  const auto [lo, hi] = std::minmax_element(deadlines.begin(), deadlines.end());
  const double span = *hi - *lo;
  if (span <= 0.0) return out;
  for (std::size_t i = 0; i < deadlines.size(); ++i) {
    const int h = 1 + static_cast<int>(std::floor((deadlines[i] - *lo) / span * out.classes));
    out.class_of[i] = std::min(h, out.classes);
  }
  return out;
}

PriorityAssignment random_assign(std::span<const double> deadlines, int k, Rng& rng) {
  PriorityAssignment out;
  out.classes = std::max(k, 1);
  out.class_of.assign(deadlines.size(), 1);
  if (deadlines.empty()) return out;
  const auto [lo, hi] = std::minmax_element(deadlines.begin(), deadlines.end());
  std::vector<double> bounds(static_cast<std::size_t>(out.classes - 1));
  for (double& v : bounds) v = rng.uniform(*lo, *hi);
  std::sort(bounds.begin(), bounds.end());
  for (std::size_t i = 0; i < deadlines.size(); ++i) {
    const auto below = std::lower_bound(bounds.begin(), bounds.end(), deadlines[i]) - bounds.begin();
    out.class_of[i] = 1 + static_cast<int>(below);
  }
  return out;
}

std::vector<double> class_deadlines_from(std::span<const double> deadlines, const PriorityAssignment& a) {
  std::vector<double> T(static_cast<std::size_t>(a.classes), kInfinity);
  for (std::size_t i = 0; i < deadlines.size(); ++i) {
    double& t = T[static_cast<std::size_t>(a.class_of[i] - 1)];
    t = std::min(t, deadlines[i]);
  }
  for (double& t : T) {
    if (t == kInfinity) t = 0.0;
  }
  return T;
}

SpSolution evaluate_local_deadlines(const Scenario& s, const Eigen::VectorXd& D, const LocalDeadlines& local,
                                    std::string strategy) {
  SpSolution out;
  out.strategy = std::move(strategy);
  out.shaping_delays = D;
  const int k = s.scheduler.class_count();
  const auto hops = hops_by_link(s);
  for (std::size_t j = 0; j < s.link_count(); ++j) {
    LinkPlan plan;
    plan.link = static_cast<int>(j);
    std::vector<double> deadlines;
    for (const Hop& h : hops[j]) {
      plan.flows.push_back(h.flow);
      deadlines.push_back(local.value[h.flow][h.pos]);
    }
    plan.assignment = kmeans_assign(deadlines, k);
    plan.class_deadlines = class_deadlines_from(deadlines, plan.assignment);
    out.links.push_back(std::move(plan));
  }
  recompute_bandwidths(s, out);
  return out;
}

SpSolution sp_ns_solve(const Scenario& s) {
  const Eigen::VectorXd D = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.flows.size()));
  return evaluate_local_deadlines(s, D, LocalDeadlines::even_split(s, D), "ns");
}

SpSolution sp_fs_solve(const Scenario& s) {
  const Eigen::VectorXd D = shaping_caps(s);
  return evaluate_local_deadlines(s, D, LocalDeadlines::even_split(s, D), "fs");
}

DeadlineReduction reduce_class_deadline(const LinkClassState& state, int h, double link_rate) {
  const double Th = state.deadline(h);
  const ConcaveCurve higher = higher_priority_arrival(state, h);

  std::vector<std::size_t> members;
  for (std::size_t k = 0; k < state.flows.size(); ++k) {
    if (state.flows[k].priority == h) members.push_back(k);
  }
  auto delays_at = [&](double T) {
    std::vector<double> D;
    D.reserve(state.flows.size());
    for (const LinkFlow& f : state.flows) D.push_back(f.shaping_delay);
    for (std::size_t k : members) {
      const LinkFlow& f = state.flows[k];
      const double budget = f.local_deadline + f.shaping_delay;
      D[k] = std::clamp(budget - T, 0.0, f.profile.max_shaping_delay());
    }
    return D;
  };
  auto feasible = [&](double T) {
    const std::vector<double> D = delays_at(T);
    std::vector<ConcaveCurve> curves;
    for (std::size_t k : members) curves.push_back(make_2src_curve(Reprofiler(state.flows[k].profile, D[k])));
    return service_fits(curve_sum(curves), higher, T, link_rate);
  };

  DeadlineReduction out;
  double crossing = higher_priority_crossing(state, h, link_rate);
  out.lower_limit = std::clamp(crossing, 0.0, Th);
  double lo = out.lower_limit;
  double hi = Th;
  if (members.empty() || lo >= hi) {
    out.deadline = Th;
  } else if (feasible(lo)) {
    out.deadline = lo;
  } else if (!feasible(hi)) {
    out.deadline = Th;
  } else {
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? hi : lo) = mid;
    }
    out.deadline = hi;
  }
  out.delays = delays_at(out.deadline);
  return out;
}

AdjustmentResult adjustment(const Scenario& s, const Eigen::VectorXd& D0, const LocalDeadlines& local0,
                            const AdjustmentOptions& options) {
  AdjustmentResult result;
  const int k = s.scheduler.class_count();
  const auto hops = hops_by_link(s);
  const std::vector<int> order = processing_order(s, hops);
  const Eigen::VectorXd caps = shaping_caps(s);

  Eigen::VectorXd D = D0;
  LocalDeadlines local = local0;

  SpSolution initial = evaluate_local_deadlines(s, D, local, "gr");
  result.initial_total = initial.total;
  result.total = initial.total;
  result.solution = std::move(initial);

  auto note_excess = [&](double before, double after) {
    if (!std::isfinite(before) || before <= 0.0) return;
    result.worst_reduction_excess = std::max(result.worst_reduction_excess, (after - before) / before);
  };

  double previous = kInfinity;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    std::vector<LinkPlan> plans(s.link_count());
    for (int j : order) {
      const auto& link_hops = hops[static_cast<std::size_t>(j)];
      LinkPlan& plan = plans[static_cast<std::size_t>(j)];
      plan.link = j;
      std::vector<double> deadlines;
      for (const Hop& hp : link_hops) {
        plan.flows.push_back(hp.flow);
        deadlines.push_back(local.value[hp.flow][hp.pos]);
      }
      plan.assignment = kmeans_assign(deadlines, k);
      plan.class_deadlines.assign(static_cast<std::size_t>(k), 0.0);
      if (link_hops.empty()) continue;

      LinkClassState state;
      state.link = j;
      state.classes = k;
      state.class_deadlines = plan.class_deadlines;
      double running = 0.0;
      for (std::size_t m = 0; m < link_hops.size(); ++m) {
        const FlowSpec& f = s.flows[link_hops[m].flow];
        state.flows.push_back({f.id, f.profile, D[static_cast<Eigen::Index>(link_hops[m].flow)],
                               plan.assignment.class_of[m], deadlines[m]});
        running += f.profile.rate;
      }

      for (int h = 1; h <= k; ++h) {
        const std::vector<std::size_t> members = plan.assignment.members(h);
        if (members.empty()) continue;
        double Th = kInfinity;
        for (std::size_t m : members) Th = std::min(Th, deadlines[m]);
        // Members give up local slack to shaping: D_i = min(T~_ij + D_i - T_hj, b/r).
        for (std::size_t m : members) {
          LinkFlow& lf = state.flows[m];
          const double budget = deadlines[m] + lf.shaping_delay;
          lf.shaping_delay = std::clamp(budget - Th, 0.0, caps[static_cast<Eigen::Index>(link_hops[m].flow)]);
          lf.local_deadline = budget - lf.shaping_delay;
        }
        state.class_deadlines[static_cast<std::size_t>(h - 1)] = Th;
        const double class_rate = class_bandwidth(state, h).rate;
        const double before = std::max(running, class_rate);
        running = before;

        double Tstar = Th;
        if (std::isfinite(running)) {
          const DeadlineReduction red = reduce_class_deadline(state, h, running);
          Tstar = red.deadline;
          for (std::size_t m : members) {
            LinkFlow& lf = state.flows[m];
            const double budget = lf.local_deadline + lf.shaping_delay;
            lf.shaping_delay = red.delays[m];
            lf.local_deadline = budget - lf.shaping_delay;
          }
          state.class_deadlines[static_cast<std::size_t>(h - 1)] = Tstar;
          const double after = std::max(running, class_bandwidth(state, h).rate);
          note_excess(before, after);
          if (options.record_reductions) result.reductions.push_back({j, h, before, after});
        }
        plan.class_deadlines[static_cast<std::size_t>(h - 1)] = Tstar;
        for (std::size_t m : members) {
          D[static_cast<Eigen::Index>(link_hops[m].flow)] = state.flows[m].shaping_delay;
          local.value[link_hops[m].flow][link_hops[m].pos] = Tstar;
        }
      }
      note_excess(running, link_bandwidth(state).rate);
    }

    SpSolution snapshot;
    snapshot.strategy = "gr";
    snapshot.shaping_delays = D;
    snapshot.links = std::move(plans);
    recompute_bandwidths(s, snapshot);
    const double total = snapshot.total;
    result.iteration_totals.push_back(total);
    if (iter == 1) result.first_iteration_total = total;
    if (total < result.total) {
      result.total = total;
      result.solution = std::move(snapshot);
    }

    // Hand unused budget back evenly across each flow's hops.
    for (std::size_t i = 0; i < s.flows.size(); ++i) {
      auto& mine = local.value[i];
      const double room = s.flows[i].deadline - D[static_cast<Eigen::Index>(i)];
      const double used = std::accumulate(mine.begin(), mine.end(), 0.0);
      const double residual = room - used;
      if (residual > 0.0) {
        for (double& v : mine) v += residual / static_cast<double>(mine.size());
      } else if (residual < 0.0 && used > 0.0) {
        const double factor = std::max(0.0, room) / used;
        for (double& v : mine) v *= factor;
      }
    }

    double improvement;
    if (iter == 1) {
      improvement = 1.0;
    } else if (!std::isfinite(previous)) {
      improvement = std::isfinite(total) ? 1.0 : 0.0;
    } else {
      improvement = (previous - total) / previous;
    }
    previous = total;
    if (!(improvement > options.epsilon)) break;
  }
  return result;
}

std::vector<double> GammaSchedule::default_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
  return g;
}

GreedyResult greedy_reprofiling(const Scenario& s, const GammaSchedule& schedule, double epsilon) {
  GreedyResult out;
  const Eigen::VectorXd caps = shaping_caps(s);
  double best = kInfinity;
  bool have = false;
  AdjustmentOptions options;
  options.epsilon = epsilon;

  auto run = [&](double gamma) {
    if (out.explored.count(gamma)) return;
    const Eigen::VectorXd D = gamma * caps;
    AdjustmentResult adj = adjustment(s, D, LocalDeadlines::even_split(s, D), options);
    out.explored[gamma] = adj.total;
    out.worst_reduction_excess = std::max(out.worst_reduction_excess, adj.worst_reduction_excess);
    if (adj.total > adj.first_iteration_total) out.running_minimum_held = false;
    const double tol = 1e-12 * std::abs(best);
    const bool better = !have || adj.total < best - tol ||
                        (std::abs(adj.total - best) <= tol && gamma < out.gamma);
    if (better) {
      best = adj.total;
      out.gamma = gamma;
      out.solution = std::move(adj.solution);
      have = true;
    }
  };

  for (double g : schedule.grid) run(std::clamp(g, 0.0, 1.0));
  for (int round = 0; round < schedule.depth && schedule.refine_points > 1; ++round) {
    std::vector<double> keys;
    for (const auto& [g, _] : out.explored) keys.push_back(g);
    const auto it = std::lower_bound(keys.begin(), keys.end(), out.gamma);
    const std::size_t idx = static_cast<std::size_t>(it - keys.begin());
    const double left = idx > 0 ? keys[idx - 1] : keys[idx];
    const double right = idx + 1 < keys.size() ? keys[idx + 1] : keys[idx];
    if (right <= left) break;
    for (int p = 0; p < schedule.refine_points; ++p) {
      run(left + (right - left) * p / (schedule.refine_points - 1));
    }
  }
  out.solution.strategy = "gr";
  return out;
}

std::vector<ShapingRatio> shaping_ratio_report(const Scenario& s, const SpSolution& sol) {
  std::map<int, std::pair<double, double>> acc;  // class -> (weighted ratio, weight)
  for (const LinkPlan& plan : sol.links) {
    for (std::size_t k = 0; k < plan.flows.size(); ++k) {
      const std::size_t i = plan.flows[k];
      const FlowSpec& f = s.flows[i];
      const double w = 1.0 / static_cast<double>(f.path.size());
      const double ratio = sol.shaping_delays[static_cast<Eigen::Index>(i)] / f.max_shaping_delay();
      auto& [num, den] = acc[plan.assignment.class_of[k]];
      num += ratio * w;
      den += w;
    }
  }
  std::vector<ShapingRatio> out;
  for (const auto& [h, nd] : acc) {
    if (nd.second > 0.0) out.push_back({h, nd.first / nd.second, nd.second});
  }
  return out;
}

}  // namespace reprofile::sp
