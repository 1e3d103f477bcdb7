// Acceptance run: one PASS/FAIL line per criterion. Tolerances, instance
// counts and runtime limits are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "reprofile/fifo.hpp"
#include "reprofile/oracle.hpp"
#include "reprofile/provision.hpp"
#include "reprofile/scenarios.hpp"
#include "reprofile/staticprio.hpp"
#include "support.hpp"

using namespace reprofile;

namespace {

constexpr double kFsMeanGap = 0.02;          // 1: mean |fs - oracle| / oracle
constexpr double kGridSlack = 1e-6;          // 2: relative soundness tolerance
constexpr double kTightness = 1e-4;          // 2: C (1 - 1e-4) must violate
constexpr double kTieTolerance = 1e-9;       // 3: ordered optimum vs overall optimum
constexpr double kClosedFormTol = 1e-9;      // 4
constexpr double kDominanceTol = 1e-6;       // 5: gr <= fs (1 + tol)
constexpr double kFsOverNs = 0.50;           // 5: mean (ns - fs) / ns
constexpr double kVanishing = 0.005;         // 6: improvement at the extremes
constexpr double kReductionTol = 1e-9;       // 7
constexpr double kKmeansShare = 0.80;        // 8: links where k-means is best

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(int id, bool pass, double secs, double limit, const std::string& detail) {
  const bool in_time = secs < limit;
  if (!(pass && in_time)) ++failures;
  std::printf("criterion %d: %s  %s  [%.1f s, limit %.0f s]\n", id, pass && in_time ? "PASS" : "FAIL", detail.c_str(),
              secs, limit);
  std::fflush(stdout);
}

// Adjustment runs observed anywhere in this binary, for criterion 7.
struct SafetyLog {
  std::size_t runs = 0;
  double worst_excess = 0.0;
  bool running_minimum = true;

  void add(const sp::GreedyResult& g) {
    runs += g.explored.size();
    worst_excess = std::max(worst_excess, g.worst_reduction_excess);
    running_minimum = running_minimum && g.running_minimum_held;
  }
  void add(const sp::AdjustmentResult& a) {
    ++runs;
    worst_excess = std::max(worst_excess, a.worst_reduction_excess);
    running_minimum = running_minimum && a.total <= a.first_iteration_total;
  }
} safety;

// Up to 3 flows on up to 2 links with TSN or inter-DC profiles.
Scenario tiny_fifo_instance(std::uint64_t seed) {
  Rng rng(seed);
  const int links = 1 + static_cast<int>(rng.index(2));
  const std::size_t flows = 1 + rng.index(3);
  std::vector<std::vector<int>> paths;
  for (std::size_t i = 0; i < flows; ++i) {
    if (links == 2 && rng.unit() < 0.5) paths.push_back({0, 1});
    else paths.push_back({static_cast<int>(rng.index(static_cast<std::uint64_t>(links)))});
  }
  const auto model = seed % 2 == 0 ? scenarios::TrafficModel::tsn() : scenarios::TrafficModel::inter_dc();
  return testing::make_scenario(links, scenarios::sample_flows(model, flows, paths, seed));
}

void criterion1() {
  const auto t0 = Clock::now();
  double sum = 0.0, worst = 0.0;
  int above = 0;
  const int instances = 200;
  for (int k = 0; k < instances; ++k) {
    const Scenario s = tiny_fifo_instance(1000 + static_cast<std::uint64_t>(k));
    const double fs = fifo::fs_solve(s).total;
    const oracle::GridResult g = oracle::grid_min_bandwidth_fifo(s);
    const double ref = g.feasible ? g.total : kInfinity;
    const double gap = std::abs(fs - ref) / ref;
    sum += gap;
    worst = std::max(worst, gap);
    above += fs > ref * (1 + 1e-3);
  }
  const double mean = sum / instances;
  report(1, mean <= kFsMeanGap, seconds_since(t0), 300,
         fmt::format("mean |fs-oracle|/oracle = {:.4f}% (<= {}%), worst {:.2f}%, fs above oracle by >0.1% on {}/{}",
                     100 * mean, 100 * kFsMeanGap, 100 * worst, above, instances));
}

void criterion2() {
  const auto t0 = Clock::now();
  Rng rng(2);
  int unsound = 0, loose = 0;
  double worst = -kInfinity;
  const int states = 1000;
  for (int k = 0; k < states; ++k) {
    const LinkClassState st = testing::random_lattice_state(rng, 6, 4);
    const double C = link_bandwidth(st).rate;
    const testing::GridCheck at = testing::grid_check(st, C, kGridSlack);
    unsound += at.violated;
    worst = std::max(worst, at.worst_excess);
    loose += !testing::grid_check(st, C * (1 - kTightness), 0.0).violated;
  }
  report(2, unsound == 0 && loose == 0, seconds_since(t0), 60,
         fmt::format("{} states: unsound {}, not tight {}, worst (S - Ct)/Ct = {:.2e}", states, unsound, loose, worst));
}

void criterion3() {
  const auto t0 = Clock::now();
  Rng rng(3);
  int misses = 0;
  const int instances = 500;
  for (int k = 0; k < instances; ++k) {
    const std::size_t n = 1 + rng.index(5);
    std::vector<oracle::OracleFlow> f;
    std::vector<double> local;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = rng.uniform(1, 10), b = rng.uniform(1, 10);
      const double cap = b / r;
      const double u = rng.unit();
      f.push_back({r, b, u < 0.3 ? 0.0 : u < 0.45 ? cap : rng.uniform(0, cap), 1});
      local.push_back(rng.unit() < 0.2 && i > 0 ? local[rng.index(i)] : rng.uniform(0.05, 3.0));
    }
    const oracle::AssignmentResult a = oracle::enumerate_assignments_min(f, local, 2);
    const bool ok = oracle::deadline_ordered(a.best_assignment, local) &&
                    a.best_ordered <= a.best * (1 + kTieTolerance) + kTieTolerance;
    misses += !ok;
  }
  report(3, misses == 0, seconds_since(t0), 120,
         fmt::format("{} instances, deadline-ordered optimum missing on {}", instances, misses));
}

void criterion4() {
  const auto t0 = Clock::now();
  const std::vector<TokenBucketProfile> pair{{1, 4}, {1, 4}};
  const std::vector<double> D{1.0, 2.0};
  const std::vector<std::size_t> id{0, 1};
  const double two_flow = fifo::nlp_closed_form_bandwidth(pair, D, 1.0, id);
  bool ok = std::abs(two_flow - 3.0) <= kClosedFormTol * 3.0;

  Rng rng(4);
  double worst = 0.0;
  int mismatches = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + rng.index(8);
    std::vector<TokenBucketProfile> p;
    std::vector<double> delays;
    LinkClassState st;
    for (std::size_t i = 0; i < n; ++i) {
      p.emplace_back(rng.uniform(1, 100), rng.uniform(1, 100));
      const double cap = p.back().max_shaping_delay();
      const double u = rng.unit();
      delays.push_back(u < 0.15 ? 0.0 : u < 0.3 ? cap : u < 0.4 && i > 0 ? std::min(cap, delays[rng.index(i)]) : rng.uniform(0, cap));
      st.flows.push_back({static_cast<int>(i), p.back(), delays.back(), 1, 0.0});
    }
    const double T = rng.unit() < 0.1 ? 0.0 : rng.uniform(0, 2);
    st.class_deadlines = {T};
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return delays[a] < delays[b]; });
    const double closed = fifo::nlp_closed_form_bandwidth(p, delays, T, order);
    const double geo = link_bandwidth(st).rate;
    if (std::isinf(geo) || std::isinf(closed)) {
      mismatches += std::isinf(geo) != std::isinf(closed);
      continue;
    }
    const double rel = std::abs(closed - geo) / geo;
    worst = std::max(worst, rel);
    mismatches += rel > kClosedFormTol;
  }
  ok = ok && mismatches == 0;
  report(4, ok, seconds_since(t0), 60,
         fmt::format("two-flow instance C = {:.12g} (expect 3); 1000 states, mismatches {}, worst rel {:.2e}", two_flow,
                     mismatches, worst));
}

void criterion5() {
  const auto t0 = Clock::now();
  int dominance = 0, fifo_order = 0;
  double ns_gain = 0.0, gr_gain = 0.0;
  const int instances = 100;
  for (int k = 0; k < instances; ++k) {
    const auto seed = 5000 + static_cast<std::uint64_t>(k);
    const Scenario s = scenarios::gen_parking_lot(20, 3, std::nullopt, scenarios::TrafficModel::synthetic(), seed,
                                                  Scheduler::static_priority(8));
    const sp::GreedyResult g = sp::greedy_reprofiling(s);
    safety.add(g);
    const double fs = sp::sp_fs_solve(s).total;
    dominance += g.solution.total > fs * (1 + kDominanceTol);
    gr_gain += (fs - g.solution.total) / fs / instances;

    Scenario f = s;
    f.scheduler = Scheduler::fifo();
    const double ffs = fifo::fs_solve(f).total, fns = fifo::ns_solve(f).total;
    fifo_order += ffs > fns * (1 + kDominanceTol);
    ns_gain += (fns - ffs) / fns / instances;
  }
  report(5, dominance == 0 && fifo_order == 0 && ns_gain >= kFsOverNs, seconds_since(t0), 600,
         fmt::format("gr > fs on {}/{}, fifo fs > ns on {}/{}, mean fs-over-ns {:.1f}% (>= {}%), mean gr-over-fs {:.1f}%",
                     dominance, instances, fifo_order, instances, 100 * ns_gain, 100 * kFsOverNs, 100 * gr_gain));
}

void criterion6() {
  const auto t0 = Clock::now();
  const Scenario base = scenarios::gen_parking_lot(20, 3, std::nullopt, scenarios::TrafficModel::synthetic(), 6,
                                                   Scheduler::static_priority(8));
  const std::vector<double> omegas{0.01, 0.03, 0.1, 0.3, 1, 3, 10, 30, 100};
  std::string series;
  double lo = 0.0, hi = 0.0;
  for (double w : omegas) {
    const Scenario s = scenarios::scale_deadlines(base, w);
    const double fs = sp::sp_fs_solve(s).total;
    const sp::GreedyResult g = sp::greedy_reprofiling(s);
    safety.add(g);
    const double imp = (fs - g.solution.total) / fs;
    if (w == omegas.front()) lo = imp;
    if (w == omegas.back()) hi = imp;
    series += fmt::format(" {}:{:.2f}%", w, 100 * imp);
  }
  report(6, lo <= kVanishing && hi <= kVanishing, seconds_since(t0), 600,
         fmt::format("improvement gr over fs by omega:{} (extremes <= {}%)", series, 100 * kVanishing));
}

void criterion7() {
  const auto t0 = Clock::now();
  // Further runs from varied starting points on top of those logged above.
  Rng rng(7);
  for (int k = 0; k < 60; ++k) {
    const auto kind = static_cast<scenarios::ModelKind>(k % 3);
    const Scenario s = scenarios::gen_parking_lot(2 + rng.index(15), 1 + rng.index(4), rng.index(4),
                                                  scenarios::TrafficModel::of(kind), 7000 + static_cast<std::uint64_t>(k),
                                                  Scheduler::static_priority(1 + static_cast<int>(rng.index(8))));
    const double gamma = rng.unit();
    Eigen::VectorXd D(static_cast<Eigen::Index>(s.flows.size()));
    for (std::size_t i = 0; i < s.flows.size(); ++i) D[static_cast<Eigen::Index>(i)] = gamma * s.flows[i].max_shaping_delay();
    safety.add(sp::adjustment(s, D, sp::LocalDeadlines::even_split(s, D)));
  }
  const bool ok = safety.worst_excess <= kReductionTol && safety.running_minimum;
  report(7, ok, seconds_since(t0), 600,
         fmt::format("{} adjustment runs, worst post/pre reduction excess {:.2e} (<= {:.0e}), running minimum held: {}",
                     safety.runs, safety.worst_excess, kReductionTol, safety.running_minimum ? "yes" : "no"));
}

double link_rate_with(const Scenario& s, const LinkPlan& base, const Eigen::VectorXd& D,
                      const std::vector<double>& local, const PriorityAssignment& a) {
  LinkPlan plan = base;
  plan.assignment = a;
  plan.class_deadlines = sp::class_deadlines_from(local, a);
  return link_bandwidth(make_link_state(s, plan, D)).rate;
}

void criterion8() {
  const auto t0 = Clock::now();
  int links = 0, best = 0, vs_size = 0, vs_uniform = 0, vs_random = 0;
  double log_size = 0.0, log_uniform = 0.0;
  Rng random_rng(88);
  for (int k = 0; k < 100; ++k) {
    const auto kind = static_cast<scenarios::ModelKind>(k % 3);
    const int classes = 2 << (k % 3);  // 2, 4, 8
    const Scenario s = scenarios::gen_parking_lot(10, 3, std::nullopt, scenarios::TrafficModel::of(kind),
                                                  8000 + static_cast<std::uint64_t>(k), Scheduler::static_priority(classes));
    // Random shaping delays, remaining budget split evenly over the path.
    Eigen::VectorXd D(static_cast<Eigen::Index>(s.flows.size()));
    for (std::size_t i = 0; i < s.flows.size(); ++i)
      D[static_cast<Eigen::Index>(i)] = random_rng.uniform(0.0, s.flows[i].max_shaping_delay());
    const sp::LocalDeadlines local = sp::LocalDeadlines::even_split(s, D);
    const SpSolution sol = sp::evaluate_local_deadlines(s, D, local, "kmeans");
    for (const LinkPlan& plan : sol.links) {
      std::vector<double> deadlines;
      for (std::size_t i : plan.flows) {
        const auto& path = s.flows[i].path;
        const auto pos = static_cast<std::size_t>(std::find(path.begin(), path.end(), plan.link) - path.begin());
        deadlines.push_back(local.value[i][pos]);
      }
      const double km = link_rate_with(s, plan, D, deadlines, sp::kmeans_assign(deadlines, classes));
      const double ss = link_rate_with(s, plan, D, deadlines, sp::same_size_assign(deadlines, classes));
      const double un = link_rate_with(s, plan, D, deadlines, sp::uniform_assign(deadlines, classes));
      const double rn = link_rate_with(s, plan, D, deadlines, sp::random_assign(deadlines, classes, random_rng));
      auto le = [](double a, double b) { return a <= b * (1 + 1e-9); };
      ++links;
      log_size += std::log(km / ss);
      log_uniform += std::log(km / un);
      vs_size += le(km, ss);
      vs_uniform += le(km, un);
      vs_random += le(km, rn);
      best += le(km, ss) && le(km, un);
    }
  }
  const double share = static_cast<double>(best) / links;
  report(8, share >= kKmeansShare, seconds_since(t0), 600,
         fmt::format("k-means <= same-size and uniform on {}/{} links ({:.1f}%, need {}%); <= same-size {}, <= uniform {}, "
                     "<= random {}; geometric mean k-means/same-size {:.3f}, k-means/uniform {:.3f}",
                     best, links, 100 * share, 100 * kKmeansShare, vs_size, vs_uniform, vs_random,
                     std::exp(log_size / links), std::exp(log_uniform / links)));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
