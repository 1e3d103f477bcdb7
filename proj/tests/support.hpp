#pragma once

// Shared generators for randomized tests.

#include <algorithm>
#include <cmath>
#include <vector>

#include "reprofile/network.hpp"
#include "reprofile/provision.hpp"
#include "reprofile/random.hpp"

namespace reprofile::testing {

inline FlowSpec make_flow(int id, double r, double b, double d, std::vector<int> path) {
  FlowSpec f;
  f.id = id;
  f.profile = TokenBucketProfile(r, b);
  f.deadline = d;
  f.path = std::move(path);
  return f;
}

inline Scenario make_scenario(int links, std::vector<FlowSpec> flows, Scheduler sched = Scheduler::fifo()) {
  Scenario s;
  for (int j = 0; j < links; ++j) s.topology.links.push_back({j, "", 0.0});
  s.flows = std::move(flows);
  s.scheduler = sched;
  return s;
}

// Times on the lattice 2^-6 s within [0, 4]; every kink of the resulting
// service functions lands on the 2^-10 s sampling grid.
inline constexpr double kLatticeStep = 1.0 / 64.0;
inline constexpr double kSampleStep = 1.0 / 1024.0;

inline double lattice(Rng& rng, int max_steps) {
  return kLatticeStep * static_cast<double>(rng.index(static_cast<std::uint64_t>(max_steps) + 1));
}

inline LinkClassState random_lattice_state(Rng& rng, int max_flows, int max_classes) {
  LinkClassState st;
  st.classes = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(max_classes)));
  const int n = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(max_flows)));
  for (int i = 0; i < n; ++i) {
    const double cap = kLatticeStep * static_cast<double>(1 + rng.index(128));  // b / r
    const double r = rng.uniform(0.5, 10.0);
    LinkFlow f;
    f.id = i;
    f.profile = TokenBucketProfile(r, r * cap);
    const double u = rng.unit();
    f.shaping_delay = std::min(f.profile.max_shaping_delay(), u < 0.15 ? 0.0 : u < 0.3 ? cap : lattice(rng, 128));
    f.priority = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(st.classes)));
    st.flows.push_back(f);
  }
  for (int h = 0; h < st.classes; ++h) st.class_deadlines.push_back(kLatticeStep * static_cast<double>(1 + rng.index(128)));
  return st;
}

// S_h(t+) straight from the flow profiles.
inline double service_at(const LinkClassState& st, int h, double t) {
  const double T = st.deadline(h);
  if (t < T) return 0.0;
  double s = 0.0;
  for (const LinkFlow& f : st.flows) {
    if (f.priority > h) continue;
    const double u = f.priority == h ? t - T : t;
    const double D = f.shaping_delay;
    if (D <= 0.0) {
      s += f.profile.burst + f.profile.rate * u;
    } else {
      s += std::min(f.profile.burst / D * u, f.profile.burst - f.profile.rate * D + f.profile.rate * u);
    }
  }
  return s;
}

struct GridCheck {
  double worst_excess = -INFINITY;  // max over samples of (S - C t) / (C t)
  bool violated = false;
};

// S_h(t) vs C t on t_k = k 2^-10 (k < 10^4, right-limits at T_h) for every
// non-empty class, plus one far-horizon point per class for the asymptote.
inline GridCheck grid_check(const LinkClassState& st, double C, double slack) {
  GridCheck out;
  for (int h = 1; h <= st.classes; ++h) {
    if (st.class_empty(h)) continue;
    const double T = st.deadline(h);
    double far = 0.0, rate = 0.0;
    for (const LinkFlow& f : st.flows) {
      if (f.priority <= h) {
        rate += f.profile.rate;
        far += f.profile.burst;
      }
    }
    std::vector<double> ts;
    for (int k = 0; k < 10000; ++k) {
      const double t = k * kSampleStep;
      if (t >= T) ts.push_back(t);
    }
    ts.push_back(1e7 * (T + 8.0 + far / rate));
    for (double t : ts) {
      const double s = service_at(st, h, t);
      const double supply = C * t;
      if (supply <= 0.0) {
        if (s > 0.0) out.violated = true;
        continue;
      }
      const double excess = (s - supply) / supply;
      out.worst_excess = std::max(out.worst_excess, excess);
      if (excess > slack) out.violated = true;
    }
  }
  return out;
}

}  // namespace reprofile::testing
