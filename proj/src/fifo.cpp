#include "reprofile/fifo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "optimize.hpp"
#include "reprofile/random.hpp"

namespace reprofile::fifo {

namespace {

Eigen::VectorXd shaping_caps(const Scenario& s) {
  Eigen::VectorXd caps(static_cast<Eigen::Index>(s.flows.size()));
  for (std::size_t i = 0; i < s.flows.size(); ++i) caps[static_cast<Eigen::Index>(i)] = s.flows[i].max_shaping_delay();
  return caps;
}

double max_deadline(const Scenario& s) {
  double tau = 0.0;
  for (const FlowSpec& f : s.flows) tau = std::max(tau, f.deadline);
  return tau;
}

// Scales every T down uniformly until all end-to-end budgets hold.
void enforce_budget(const Scenario& s, const Eigen::VectorXd& D, Eigen::VectorXd& T) {
  double factor = 1.0;
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    const FlowSpec& f = s.flows[i];
    double sum = 0.0;
    for (int j : f.path) sum += T[j];
    const double room = std::max(0.0, f.deadline - D[static_cast<Eigen::Index>(i)]);
    if (sum > room) factor = std::min(factor, room / sum);
  }
  if (factor < 1.0) T *= factor;
}

// Per-flow terms sum_i sigma_i(D_q) / (T + D_q) of one link, flows listed in
// ordering rank. Branches follow the rank: earlier flows are past their rate
// change at D_q (token branch), later ones still at their peak rate.
struct LinkTerms {
  std::vector<double> value;   // g_q
  std::vector<double> inv;     // 1 / (T + D_q), 0 when infinite
  std::vector<double> slope;   // dN_q / dD_q
};

LinkTerms link_terms(const std::vector<double>& r, const std::vector<double>& b,
                     const std::vector<double>& D, double T) {
  const std::size_t p = D.size();
  LinkTerms out;
  out.value.resize(p);
  out.inv.resize(p);
  out.slope.resize(p);
  std::vector<double> suf_peak(p + 1, 0.0), suf_zero_b(p + 1, 0.0), suf_zero_r(p + 1, 0.0),
      suf_zero_rd(p + 1, 0.0);
  for (std::size_t k = p; k-- > 0;) {
    suf_peak[k] = suf_peak[k + 1];
    suf_zero_b[k] = suf_zero_b[k + 1];
    suf_zero_r[k] = suf_zero_r[k + 1];
    suf_zero_rd[k] = suf_zero_rd[k + 1];
    if (D[k] > 0.0) {
      suf_peak[k] += b[k] / D[k];
    } else {
      suf_zero_b[k] += b[k];
      suf_zero_r[k] += r[k];
      suf_zero_rd[k] += r[k] * D[k];
    }
  }
  double pre_b = 0.0, pre_r = 0.0, pre_rd = 0.0;
  for (std::size_t q = 0; q < p; ++q) {
    const double d = D[q];
    const double n = pre_b + pre_r * d - pre_rd + b[q] + d * suf_peak[q + 1] + suf_zero_b[q + 1] +
                     suf_zero_r[q + 1] * d - suf_zero_rd[q + 1];
    const double den = T + d;
    if (den > 0.0) {
      out.inv[q] = 1.0 / den;
      out.value[q] = n / den;
    } else {
      out.inv[q] = 0.0;
      out.value[q] = n > 0.0 ? kInfinity : 0.0;
    }
    out.slope[q] = pre_r + suf_peak[q + 1] + suf_zero_r[q + 1];
    pre_b += b[q];
    pre_r += r[q];
    pre_rd += r[q] * d;
  }
  return out;
}

class NlpProblem {
 public:
  NlpProblem(const Scenario& s, const Ordering& order) : s_(s), m_(s.flows.size()), n_(s.link_count()) {
    rank_.assign(m_, 0);
    for (std::size_t k = 0; k < order.size(); ++k) rank_[order[k]] = k;
    members_ = flows_by_link(s);
    for (auto& mem : members_) {
      std::stable_sort(mem.begin(), mem.end(), [&](std::size_t a, std::size_t b) { return rank_[a] < rank_[b]; });
    }
    tau_ = std::max(max_deadline(s), 1e-300);
  }

  double tau() const { return tau_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(m_ + n_); }

  // Sum over links of the (smoothed when mu > 0) closed-form bandwidth.
  // The gradient is with respect to the normalized variables x = (D, T) / tau.
  double total(const Eigen::VectorXd& x, double mu, Eigen::VectorXd* grad) const {
    if (grad) grad->setZero(dim());
    double sum = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const auto& mem = members_[j];
      if (mem.empty()) continue;
      const std::size_t p = mem.size();
      std::vector<double> r(p), b(p), D(p);
      double stability = 0.0;
      for (std::size_t k = 0; k < p; ++k) {
        const FlowSpec& f = s_.flows[mem[k]];
        r[k] = f.profile.rate;
        b[k] = f.profile.burst;
        D[k] = tau_ * x[static_cast<Eigen::Index>(mem[k])];
        stability += r[k];
      }
      const double T = tau_ * x[static_cast<Eigen::Index>(m_ + j)];
      const LinkTerms terms = link_terms(r, b, D, T);

      Eigen::VectorXd v(static_cast<Eigen::Index>(p + 1));
      v[0] = stability;
      for (std::size_t q = 0; q < p; ++q) v[static_cast<Eigen::Index>(q + 1)] = terms.value[q];
      Eigen::VectorXd w;
      double cj;
      if (mu > 0.0) {
        cj = opt::soft_max(v, mu, grad ? &w : nullptr);
      } else {
        Eigen::Index arg;
        cj = v.maxCoeff(&arg);
        if (grad) {
          w = Eigen::VectorXd::Zero(v.size());
          w[arg] = 1.0;
        }
      }
      sum += cj;
      if (!grad || !std::isfinite(cj)) continue;

      std::vector<double> dD(p, 0.0);
      double dT = 0.0;
      // Earlier flows' token branch: -r_k / (T + D_q) for every later q.
      double later = 0.0;
      for (std::size_t q = p; q-- > 0;) {
        dD[q] += -r[q] * later;
        later += w[static_cast<Eigen::Index>(q + 1)] * terms.inv[q];
      }
      // Later flows' peak branch b_k D_q / D_k, or token branch when D_k = 0.
      double earlier_peak = 0.0, earlier_inv = 0.0;
      for (std::size_t q = 0; q < p; ++q) {
        if (D[q] > 0.0) {
          dD[q] += -b[q] / (D[q] * D[q]) * earlier_peak;
        } else {
          dD[q] += -r[q] * earlier_inv;
        }
        const double wq = w[static_cast<Eigen::Index>(q + 1)];
        earlier_peak += wq * D[q] * terms.inv[q];
        earlier_inv += wq * terms.inv[q];
        dD[q] += wq * (terms.slope[q] - terms.value[q]) * terms.inv[q];
        dT += -wq * terms.value[q] * terms.inv[q];
      }
      for (std::size_t q = 0; q < p; ++q) (*grad)[static_cast<Eigen::Index>(mem[q])] += tau_ * dD[q];
      (*grad)[static_cast<Eigen::Index>(m_ + j)] += tau_ * dT;
    }
    return sum;
  }

 private:
  const Scenario& s_;
  std::size_t m_;
  std::size_t n_;
  std::vector<std::size_t> rank_;
  std::vector<std::vector<std::size_t>> members_;
  double tau_ = 1.0;
};

constexpr double kSmoothing[] = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

std::size_t active_links(const Scenario& s) {
  std::size_t n = 0;
  for (const auto& mem : flows_by_link(s)) n += mem.empty() ? 0 : 1;
  return std::max<std::size_t>(n, 1);
}

}  // namespace

NetworkSolution FifoSolution::to_network(const Scenario& s) const {
  NetworkSolution out;
  out.strategy = strategy;
  out.shaping_delays = D;
  out.total = total;
  const auto by_link = flows_by_link(s);
  for (std::size_t j = 0; j < s.link_count(); ++j) {
    LinkPlan plan;
    plan.link = static_cast<int>(j);
    plan.flows = by_link[j];
    plan.assignment.classes = 1;
    plan.assignment.class_of.assign(plan.flows.size(), 1);
    plan.class_deadlines = {T[static_cast<Eigen::Index>(j)]};
    plan.bandwidth = C[static_cast<Eigen::Index>(j)];
    out.links.push_back(std::move(plan));
  }
  return out;
}

double FifoSolution::worst_budget_excess(const Scenario& s) const {
  double worst = -kInfinity;
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    double used = D[static_cast<Eigen::Index>(i)];
    for (int j : s.flows[i].path) used += T[j];
    worst = std::max(worst, used - s.flows[i].deadline);
  }
  return s.flows.empty() ? 0.0 : worst;
}

FifoSolution evaluate(const Scenario& s, Eigen::VectorXd D, Eigen::VectorXd T, std::string strategy) {
  FifoSolution out;
  out.strategy = std::move(strategy);
  out.D = std::move(D);
  out.T = std::move(T);
  out.C = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.link_count()));
  const auto by_link = flows_by_link(s);
  for (std::size_t j = 0; j < s.link_count(); ++j) {
    if (by_link[j].empty()) continue;
    LinkClassState state;
    state.link = static_cast<int>(j);
    state.classes = 1;
    state.class_deadlines = {out.T[static_cast<Eigen::Index>(j)]};
    for (std::size_t i : by_link[j]) {
      const FlowSpec& f = s.flows[i];
      state.flows.push_back({f.id, f.profile, out.D[static_cast<Eigen::Index>(i)], 1, 0.0});
    }
    out.C[static_cast<Eigen::Index>(j)] = link_bandwidth(state).rate;
  }
  out.total = out.C.sum();
  return out;
}

FifoSolution fs_solve(const Scenario& s) {
  return evaluate(s, shaping_caps(s), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.link_count())), "fs");
}

FifoSolution ns_solve(const Scenario& s) {
  const auto n = static_cast<Eigen::Index>(s.link_count());
  const Eigen::VectorXd D = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.flows.size()));
  Eigen::VectorXd T0 = Eigen::VectorXd::Zero(n);
  if (s.flows.empty()) return evaluate(s, D, T0, "ns");

  const auto by_link = flows_by_link(s);
  const double tau = max_deadline(s);
  Eigen::VectorXd sum_r = Eigen::VectorXd::Zero(n), sum_b = Eigen::VectorXd::Zero(n);
  opt::Polytope feasible(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& mem = by_link[static_cast<std::size_t>(j)];
    if (mem.empty()) {
      feasible.set_bounds(j, 0.0, 0.0);
      continue;
    }
    double even = kInfinity;
    for (std::size_t i : mem) {
      const FlowSpec& f = s.flows[i];
      sum_r[j] += f.profile.rate;
      sum_b[j] += f.profile.burst;
      even = std::min(even, f.deadline / static_cast<double>(f.path.size()));
    }
    T0[j] = even;
    feasible.set_bounds(j, 1e-12, 1.0);
  }
  for (const FlowSpec& f : s.flows) {
    std::vector<Eigen::Index> idx(f.path.begin(), f.path.end());
    feasible.add_halfspace(idx, std::vector<double>(idx.size(), 1.0), f.deadline / tau);
  }

  FifoSolution best = evaluate(s, D, T0, "ns");
  const double scale = best.total;
  const double mu_unit = scale / static_cast<double>(active_links(s));
  Eigen::VectorXd y = T0 / tau;
  for (double mu_rel : kSmoothing) {
    const double mu = mu_rel * mu_unit;
    auto f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      g.setZero(n);
      double total = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (by_link[static_cast<std::size_t>(j)].empty()) continue;
        const double T = tau * x[j];
        if (!(T > 0.0)) return kInfinity;
        Eigen::VectorXd v(2);
        v << sum_r[j], sum_b[j] / T;
        Eigen::VectorXd w;
        total += opt::soft_max(v, mu, &w);
        g[j] = w[1] * (-sum_b[j] / (T * T)) * tau;
      }
      g /= scale;
      return total / scale;
    };
    y = opt::projected_gradient(f, feasible, y).x;
  }
  Eigen::VectorXd T = (tau * y).cwiseMax(0.0);
  enforce_budget(s, D, T);
  FifoSolution candidate = evaluate(s, D, T, "ns");
  if (candidate.total < best.total) best = std::move(candidate);
  return best;
}

double nlp_closed_form_bandwidth(std::span<const TokenBucketProfile> profiles,
                                 std::span<const double> delays, double T,
                                 std::span<const std::size_t> order) {
  const std::size_t p = profiles.size();
  if (delays.size() != p || order.size() != p) throw OrderingViolation("ordering size mismatch");
  std::vector<bool> seen(p, false);
  for (std::size_t k : order) {
    if (k >= p || seen[k]) throw OrderingViolation("ordering is not a permutation");
    seen[k] = true;
  }
  std::vector<double> r(p), b(p), D(p);
  double stability = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    const std::size_t i = order[k];
    r[k] = profiles[i].rate;
    b[k] = profiles[i].burst;
    D[k] = delays[i];
    stability += r[k];
    if (k > 0 && D[k - 1] > D[k] + 1e-12 * std::max(1.0, std::abs(D[k]))) {
      throw OrderingViolation("shaping delays do not follow the ordering");
    }
  }
  const LinkTerms terms = link_terms(r, b, D, T);
  double c = stability;
  for (double g : terms.value) c = std::max(c, g);
  return c;
}

FifoSolution nlp_solve_for_ordering(const Scenario& s, const Ordering& order, const NlpOptions& options) {
  const std::size_t m = s.flows.size();
  const auto n = static_cast<Eigen::Index>(s.link_count());
  if (order.size() != m) throw OrderingViolation("ordering size mismatch");
  if (m == 0) return evaluate(s, Eigen::VectorXd(), Eigen::VectorXd::Zero(n), "nlp");

  const NlpProblem problem(s, order);
  const double tau = problem.tau();
  const Eigen::VectorXd caps = shaping_caps(s);
  const auto by_link = flows_by_link(s);
  const auto mi = static_cast<Eigen::Index>(m);

  opt::Polytope feasible(problem.dim());
  for (Eigen::Index i = 0; i < mi; ++i) feasible.set_bounds(i, 0.0, caps[i] / tau);
  for (Eigen::Index j = 0; j < n; ++j) {
    feasible.set_bounds(mi + j, 0.0, by_link[static_cast<std::size_t>(j)].empty() ? 0.0 : 1.0);
  }
  feasible.add_chain(std::vector<Eigen::Index>(order.begin(), order.end()));
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Eigen::Index> idx{static_cast<Eigen::Index>(i)};
    for (int j : s.flows[i].path) idx.push_back(mi + j);
    feasible.add_halfspace(idx, std::vector<double>(idx.size(), 1.0), s.flows[i].deadline / tau);
  }

  // Starts are made consistent with the ordering by lowering D (suffix
  // minimum along the order), then T is scaled down to restore budgets.
  auto repair = [&](Eigen::VectorXd D, Eigen::VectorXd T) {
    D = D.cwiseMax(0.0).cwiseMin(caps);
    double floor = kInfinity;
    for (std::size_t k = m; k-- > 0;) {
      const auto i = static_cast<Eigen::Index>(order[k]);
      floor = std::min(floor, D[i]);
      D[i] = floor;
    }
    enforce_budget(s, D, T);
    return std::pair{D, T};
  };

  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> starts;
  starts.push_back(repair(caps, Eigen::VectorXd::Zero(n)));
  starts.push_back(repair(Eigen::VectorXd::Zero(mi), ns_solve(s).T));
  Rng rng(options.seed);
  for (int k = 0; k < options.random_starts; ++k) {
    Eigen::VectorXd D(mi), T = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < mi; ++i) D[i] = rng.unit() * caps[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& mem = by_link[static_cast<std::size_t>(j)];
      if (mem.empty()) continue;
      double room = kInfinity;
      for (std::size_t i : mem) {
        room = std::min(room, (s.flows[i].deadline - D[static_cast<Eigen::Index>(i)]) /
                                  static_cast<double>(s.flows[i].path.size()));
      }
      T[j] = rng.uniform(0.1, 1.0) * std::max(0.0, room);
    }
    starts.push_back(repair(D, T));
  }

  opt::PgOptions pg;
  pg.max_iterations = options.max_iterations;
  pg.rel_tol = options.rel_tol;

  FifoSolution best;
  best.total = kInfinity;
  const double links = static_cast<double>(active_links(s));
  for (const auto& [D0, T0] : starts) {
    FifoSolution start = evaluate(s, D0, T0, "nlp");
    if (start.total < best.total) best = start;
    if (!std::isfinite(start.total)) continue;

    Eigen::VectorXd x(problem.dim());
    x << D0 / tau, T0 / tau;
    const double scale = start.total;
    for (double mu_rel : kSmoothing) {
      const double mu = mu_rel * scale / links;
      auto f = [&](const Eigen::VectorXd& v, Eigen::VectorXd& g) {
        const double total = problem.total(v, mu, &g);
        g /= scale;
        return total / scale;
      };
      x = opt::projected_gradient(f, feasible, x, pg).x;
    }
    Eigen::VectorXd D = (tau * x.head(mi)).cwiseMax(0.0).cwiseMin(caps);
    Eigen::VectorXd T = (tau * x.tail(n)).cwiseMax(0.0);
    enforce_budget(s, D, T);
    FifoSolution candidate = evaluate(s, D, T, "nlp");
    if (candidate.total < best.total) best = std::move(candidate);
  }
  return best;
}

Ordering shaping_cap_ordering(const Scenario& s) {
  Ordering order(s.flows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s.flows[a].max_shaping_delay() < s.flows[b].max_shaping_delay();
  });
  return order;
}

std::size_t default_search_budget(std::size_t flows) {
  const double m = static_cast<double>(std::max<std::size_t>(flows, 2));
  const double budget = std::ceil(10.0 * std::lgamma(m + 1.0));
  return static_cast<std::size_t>(std::clamp(budget, 1.0, 200.0));
}

FifoSolution randomized_search(const Scenario& s, std::size_t budget, std::uint64_t seed,
                               const NlpOptions& options) {
  budget = std::max<std::size_t>(budget, 1);
  Rng rng(seed);
  Ordering order = shaping_cap_ordering(s);
  FifoSolution best;
  for (std::size_t k = 0; k < budget; ++k) {
    if (k > 0) rng.shuffle(order);
    NlpOptions o = options;
    o.seed = options.seed + k;
    FifoSolution candidate = nlp_solve_for_ordering(s, order, o);
    if (k == 0 || candidate.total < best.total) best = std::move(candidate);
  }
  return best;
}

}  // namespace reprofile::fifo
