#include "optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace reprofile::opt {

Polytope::Polytope(Eigen::Index dim)
    : lo_(Eigen::VectorXd::Constant(dim, -std::numeric_limits<double>::infinity())),
      hi_(Eigen::VectorXd::Constant(dim, std::numeric_limits<double>::infinity())) {}

void Polytope::set_bounds(Eigen::Index i, double lo, double hi) {
  lo_[i] = lo;
  hi_[i] = std::max(lo, hi);
}

void Polytope::add_chain(std::vector<Eigen::Index> chain) {
  if (chain.size() > 1) chains_.push_back(std::move(chain));
}

void Polytope::add_halfspace(std::vector<Eigen::Index> index, std::vector<double> coeff, double bound) {
  double n2 = 0.0;
  for (double c : coeff) n2 += c * c;
  if (n2 <= 0.0) return;
  halfspaces_.push_back({std::move(index), std::move(coeff), bound, n2});
}

void Polytope::project_box(Eigen::VectorXd& x) const { x = x.cwiseMax(lo_).cwiseMin(hi_); }

// Pool-adjacent-violators on the chain's subsequence.
void Polytope::project_chain(const std::vector<Eigen::Index>& chain, Eigen::VectorXd& x) const {
  std::vector<double> value;
  std::vector<int> count;
  value.reserve(chain.size());
  count.reserve(chain.size());
  for (Eigen::Index idx : chain) {
    value.push_back(x[idx]);
    count.push_back(1);
    while (value.size() > 1 && value[value.size() - 2] > value.back()) {
      const double v = value.back();
      const int c = count.back();
      value.pop_back();
      count.pop_back();
      value.back() = (value.back() * count.back() + v * c) / (count.back() + c);
      count.back() += c;
    }
  }
  std::size_t k = 0;
  for (std::size_t b = 0; b < value.size(); ++b) {
    for (int c = 0; c < count[b]; ++c) x[chain[k++]] = value[b];
  }
}

void Polytope::project_halfspace(const Halfspace& h, Eigen::VectorXd& x) {
  double dot = 0.0;
  for (std::size_t k = 0; k < h.index.size(); ++k) dot += h.coeff[k] * x[h.index[k]];
  if (dot <= h.bound) return;
  const double scale = (dot - h.bound) / h.norm2;
  for (std::size_t k = 0; k < h.index.size(); ++k) x[h.index[k]] -= scale * h.coeff[k];
}

Eigen::VectorXd Polytope::project(const Eigen::VectorXd& z, int max_cycles, double tol) const {
  Eigen::VectorXd x = z;
  if (chains_.empty() && halfspaces_.empty()) {
    project_box(x);
    return x;
  }
  const std::size_t sets = 1 + chains_.size() + halfspaces_.size();
  std::vector<Eigen::VectorXd> corr(sets, Eigen::VectorXd::Zero(z.size()));
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    const Eigen::VectorXd start = x;
    std::size_t s = 0;
    auto step = [&](auto&& proj) {
      Eigen::VectorXd y = x + corr[s];
      Eigen::VectorXd p = y;
      proj(p);
      corr[s] = y - p;
      x = std::move(p);
      ++s;
    };
    step([&](Eigen::VectorXd& v) { project_box(v); });
    for (const auto& c : chains_) step([&](Eigen::VectorXd& v) { project_chain(c, v); });
    for (const auto& h : halfspaces_) step([&](Eigen::VectorXd& v) { project_halfspace(h, v); });
    if ((x - start).lpNorm<Eigen::Infinity>() <= tol * (1.0 + x.lpNorm<Eigen::Infinity>())) break;
  }
  return x;
}

bool Polytope::contains(const Eigen::VectorXd& x, double tol) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
  }
  for (const auto& c : chains_) {
    for (std::size_t k = 1; k < c.size(); ++k) {
      if (x[c[k - 1]] > x[c[k]] + tol) return false;
    }
  }
  for (const auto& h : halfspaces_) {
    double dot = 0.0;
    for (std::size_t k = 0; k < h.index.size(); ++k) dot += h.coeff[k] * x[h.index[k]];
    if (dot > h.bound + tol) return false;
  }
  return true;
}

PgResult projected_gradient(const Objective& f, const Polytope& feasible, Eigen::VectorXd x0,
                            const PgOptions& options) {
  PgResult out;
  out.x = feasible.project(x0);
  Eigen::VectorXd grad(out.x.size());
  out.value = f(out.x, grad);
  if (!std::isfinite(out.value)) return out;

  // Each iteration starts from twice the last accepted step, capped at the
  // initial step, so that a run settling on a small step size does not pay
  // for the full backtracking ladder every time.
  double last = options.initial_step;
  Eigen::VectorXd next_grad(out.x.size());
  for (int it = 0; it < options.max_iterations; ++it) {
    out.iterations = it + 1;
    double t = std::min(options.initial_step, 2.0 * last);
    bool accepted = false;
    Eigen::VectorXd y;
    double fy = 0.0;
    for (int bt = 0; bt < options.max_backtracks; ++bt, t *= options.shrink) {
      y = feasible.project(out.x - t * grad);
      const double decrease = grad.dot(out.x - y);
      if (decrease <= 0.0) break;  // projected gradient vanished
      fy = f(y, next_grad);
      if (std::isfinite(fy) && fy <= out.value - options.armijo * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    last = t;
    const double rel = (out.value - fy) / std::max(std::abs(out.value), 1e-300);
    out.x = std::move(y);
    out.value = fy;
    grad = next_grad;
    if (rel < options.rel_tol) break;
  }
  return out;
}

double soft_max(const Eigen::VectorXd& v, double mu, Eigen::VectorXd* weights) {
  const double top = v.maxCoeff();
  if (!std::isfinite(top)) {
    if (weights) {
      *weights = Eigen::VectorXd::Zero(v.size());
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] == top) {
          (*weights)[i] = 1.0;
          break;
        }
      }
    }
    return top;
  }
  Eigen::ArrayXd e = ((v.array() - top) / mu).exp();
  const double sum = e.sum();
  if (weights) *weights = (e / sum).matrix();
  return top + mu * std::log(sum);
}

}  // namespace reprofile::opt
