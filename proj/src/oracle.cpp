#include "reprofile/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace reprofile::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Maximizes a unimodal f on [0, U] by repeated uniform sampling; returns the
// largest sample seen.
template <class F>
double zoom_max(F&& f, double U, const TimeGrid& grid) {
  double best = f(0.0);
  if (best == kInf || !(U > 0.0)) return best;
  double lo = 0.0, hi = U;
  const int n = std::max(grid.samples, 4);
  for (int level = 0; level <= grid.zoom_levels; ++level) {
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    double top = -kInf;
    for (int k = 0; k <= n; ++k) {
      v[static_cast<std::size_t>(k)] = f(lo + (hi - lo) * k / n);
      top = std::max(top, v[static_cast<std::size_t>(k)]);
    }
    best = std::max(best, top);
    if (top == kInf) return top;
    int first = n, last = 0;
    for (int k = 0; k <= n; ++k) {
      if (v[static_cast<std::size_t>(k)] >= top) {
        first = std::min(first, k);
        last = std::max(last, k);
      }
    }
    const double step = (hi - lo) / n;
    const double new_lo = lo + std::max(0, first - 1) * step;
    const double new_hi = lo + std::min(n, last + 1) * step;
    lo = new_lo;
    hi = new_hi;
    if (hi - lo <= 1e-15 * U) break;
  }
  return best;
}

}  // namespace

double reshaped_arrival(double rate, double burst, double delay, double t) {
  if (t < 0.0) return 0.0;
  if (delay <= 0.0) return burst + rate * t;
  const double peak = burst / delay;
  return std::min(peak * t, burst - rate * delay + rate * t);
}

double dense_class_rate(std::span<const OracleFlow> flows, int h, double T, const TimeGrid& grid) {
  bool any = false;
  double U = 0.0;
  for (const OracleFlow& f : flows) {
    if (f.cls == h) {
      any = true;
      U = std::max(U, f.delay);
    } else if (f.cls < h) {
      U = std::max(U, f.delay - T);
    }
  }
  if (!any) return 0.0;

  auto ratio = [&](double u) {
    const double t = T + u;
    double s = 0.0;
    double slope0 = 0.0;  // d S / dt at 0+, used only when t == 0
    for (const OracleFlow& f : flows) {
      if (f.cls > h) continue;
      const double at = f.cls == h ? u : t;
      s += reshaped_arrival(f.rate, f.burst, f.delay, at);
      if (f.delay > 0.0) slope0 += f.burst / f.delay;
    }
    if (t > 0.0) return s / t;
    return s > 0.0 ? kInf : slope0;
  };
  return zoom_max(ratio, U, grid);
}

double dense_link_rate(std::span<const OracleFlow> flows, std::span<const double> class_deadlines,
                       const TimeGrid& grid) {
  double c = 0.0;
  for (const OracleFlow& f : flows) c += f.rate;
  for (std::size_t h = 1; h <= class_deadlines.size(); ++h) {
    c = std::max(c, dense_class_rate(flows, static_cast<int>(h), class_deadlines[h - 1], grid));
  }
  return c;
}

GridResult grid_min_bandwidth_fifo(const Scenario& s, const GridOptions& options) {
  const std::size_t m = s.flows.size();
  const std::size_t n = s.link_count();
  if (m > 3 || n > 3) throw OracleRefused("grid oracle handles at most 3 flows and 3 links");
  GridResult result;
  result.D = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  result.T = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (m == 0) return result;

  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < m; ++i) {
    for (int j : s.flows[i].path) members[static_cast<std::size_t>(j)].push_back(i);
  }
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < n; ++j) {
    if (!members[j].empty()) active.push_back(j);
  }
  const std::size_t last = active.back();
  const std::vector<std::size_t> gridded(active.begin(), active.end() - 1);

  // Decision vector: D for every flow, then T for each gridded link.
  const std::size_t dim = m + gridded.size();
  std::vector<double> hi(dim);
  for (std::size_t i = 0; i < m; ++i) hi[i] = std::min(s.flows[i].deadline, s.flows[i].profile.burst / s.flows[i].profile.rate);
  for (std::size_t g = 0; g < gridded.size(); ++g) {
    double d = 0.0;
    for (std::size_t i : members[gridded[g]]) d = std::max(d, s.flows[i].deadline);
    hi[m + g] = d;
  }

  struct Eval {
    double total;
    double gap;
  };
  std::vector<OracleFlow> buf;
  auto evaluate = [&](const std::vector<double>& x, std::vector<double>* T_out) -> Eval {
    std::vector<double> T(n, 0.0);
    for (std::size_t g = 0; g < gridded.size(); ++g) T[gridded[g]] = x[m + g];
    // The last link takes whatever budget remains: C_j only falls as T_j grows.
    double room = kInf;
    double gap = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double used = x[i];
      bool on_last = false;
      for (int j : s.flows[i].path) {
        if (static_cast<std::size_t>(j) == last) on_last = true;
        else used += T[static_cast<std::size_t>(j)];
      }
      const double left = s.flows[i].deadline - used;
      if (on_last) room = std::min(room, left);
      else gap = std::max(gap, -left);
    }
    gap = std::max(gap, -room);
    T[last] = std::max(0.0, room);
    if (T_out) *T_out = T;
    if (gap > 0.0) return {kInf, gap};
    double total = 0.0;
    for (std::size_t j : active) {
      buf.clear();
      for (std::size_t i : members[j]) buf.push_back({s.flows[i].profile.rate, s.flows[i].profile.burst, x[i], 1});
      const double Tj[] = {T[j]};
      total += dense_link_rate(buf, Tj, options.time);
      if (total == kInf) break;
    }
    return {total, 0.0};
  };

  struct Point {
    Eval e;
    std::vector<double> x;
  };
  auto better = [](const Eval& a, const Eval& b) {
    if (a.gap != b.gap) return a.gap < b.gap;
    return a.total < b.total;
  };

  // Coarse pass over the full box.
  const int res = std::max(options.resolution, 1);
  std::vector<Point> top;
  std::vector<int> idx(dim, 0);
  std::vector<double> x(dim);
  while (true) {
    for (std::size_t v = 0; v < dim; ++v) x[v] = hi[v] * idx[v] / res;
    Point p{evaluate(x, nullptr), x};
    top.push_back(std::move(p));
    std::sort(top.begin(), top.end(), [&](const Point& a, const Point& b) { return better(a.e, b.e); });
    if (top.size() > static_cast<std::size_t>(std::max(options.keep, 1))) top.pop_back();
    std::size_t v = 0;
    while (v < dim && ++idx[v] > res) idx[v++] = 0;
    if (v == dim) break;
  }

  // Pattern refinement around each incumbent.
  Point best = top.front();
  for (Point incumbent : top) {
    std::vector<double> step(dim);
    for (std::size_t v = 0; v < dim; ++v) step[v] = hi[v] / res;
    const int w = std::max(options.refine_cells, 1);
    for (int round = 0; round < options.refine_rounds; ++round) {
      Point round_best = incumbent;
      std::vector<int> off(dim, -w);
      bool moved_to_edge = false;
      while (true) {
        bool edge = false;
        for (std::size_t v = 0; v < dim; ++v) {
          x[v] = std::clamp(incumbent.x[v] + off[v] * step[v], 0.0, hi[v]);
          edge = edge || std::abs(off[v]) == w;
        }
        Eval e = evaluate(x, nullptr);
        if (better(e, round_best.e)) {
          round_best = {e, x};
          moved_to_edge = edge;
        }
        std::size_t v = 0;
        while (v < dim && ++off[v] > w) off[v++] = -w;
        if (v == dim) break;
      }
      incumbent = round_best;
      if (!moved_to_edge) {
        for (double& st : step) st *= 0.5;
      }
    }
    if (better(incumbent.e, best.e)) best = incumbent;
  }

  std::vector<double> T;
  best.e = evaluate(best.x, &T);
  result.total = best.e.total;
  result.feasible = best.e.gap <= 0.0;
  result.infeasibility_gap = best.e.gap;
  for (std::size_t i = 0; i < m; ++i) result.D[static_cast<Eigen::Index>(i)] = best.x[i];
  for (std::size_t j = 0; j < n; ++j) result.T[static_cast<Eigen::Index>(j)] = T[j];
  return result;
}

bool deadline_ordered(std::span<const int> classes, std::span<const double> local_deadlines) {
  for (std::size_t a = 0; a < classes.size(); ++a) {
    for (std::size_t b = 0; b < classes.size(); ++b) {
      if (classes[a] < classes[b] && !(local_deadlines[a] < local_deadlines[b])) return false;
    }
  }
  return true;
}

AssignmentResult enumerate_assignments_min(std::span<const OracleFlow> flows,
                                           std::span<const double> local_deadlines, int k,
                                           const TimeGrid& grid) {
  const std::size_t m = flows.size();
  if (m > 6 || k > 3 || k < 1) throw OracleRefused("assignment enumeration handles at most 6 flows and 3 classes");
  AssignmentResult out;
  out.best = kInf;
  out.best_ordered = kInf;
  std::size_t count = 1;
  for (std::size_t i = 0; i < m; ++i) count *= static_cast<std::size_t>(k);

  std::vector<OracleFlow> work(flows.begin(), flows.end());
  std::vector<int> classes(m, 1);
  bool best_is_ordered = false;
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < m; ++i) {
      classes[i] = 1 + static_cast<int>(c % static_cast<std::size_t>(k));
      c /= static_cast<std::size_t>(k);
      work[i].cls = classes[i];
    }
    std::vector<double> T(static_cast<std::size_t>(k), kInf);
    for (std::size_t i = 0; i < m; ++i) {
      double& t = T[static_cast<std::size_t>(classes[i] - 1)];
      t = std::min(t, local_deadlines[i]);
    }
    for (double& t : T) {
      if (t == kInf) t = 0.0;  // empty class: dense_class_rate ignores it
    }
    const double value = dense_link_rate(work, T, grid);
    out.all.push_back(value);
    const bool ordered = deadline_ordered(classes, local_deadlines);
    if (ordered) out.best_ordered = std::min(out.best_ordered, value);

    const double tol = 1e-9 * (std::isfinite(out.best) ? std::abs(out.best) : 0.0);
    const bool improves = value < out.best - tol;
    const bool ties = std::isfinite(out.best) ? std::abs(value - out.best) <= tol : value == out.best;
    if (out.best_assignment.empty() || improves || (ties && ordered && !best_is_ordered)) {
      out.best = improves || out.best_assignment.empty() ? value : std::min(value, out.best);
      out.best_assignment = classes;
      best_is_ordered = ordered;
    }
  }
  return out;
}

}  // namespace reprofile::oracle
