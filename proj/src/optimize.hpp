#pragma once

// Small projected-gradient toolkit shared by the FIFO solvers.

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace reprofile::opt {

// Polytope = box ∩ monotone chains ∩ halfspaces a·x <= c.
class Polytope {
 public:
  explicit Polytope(Eigen::Index dim);

  void set_bounds(Eigen::Index i, double lo, double hi);
  // x[chain[0]] <= x[chain[1]] <= ...
  void add_chain(std::vector<Eigen::Index> chain);
  // sum_k coeff[k] * x[index[k]] <= bound
  void add_halfspace(std::vector<Eigen::Index> index, std::vector<double> coeff, double bound);

  // Euclidean projection by Dykstra's alternating projections.
  Eigen::VectorXd project(const Eigen::VectorXd& z, int max_cycles = 2000, double tol = 1e-13) const;
  bool contains(const Eigen::VectorXd& x, double tol = 1e-10) const;

  Eigen::Index dim() const { return lo_.size(); }
  const Eigen::VectorXd& lower() const { return lo_; }
  const Eigen::VectorXd& upper() const { return hi_; }

 private:
  struct Halfspace {
    std::vector<Eigen::Index> index;
    std::vector<double> coeff;
    double bound;
    double norm2;
  };
  void project_box(Eigen::VectorXd& x) const;
  void project_chain(const std::vector<Eigen::Index>& chain, Eigen::VectorXd& x) const;
  static void project_halfspace(const Halfspace& h, Eigen::VectorXd& x);

  Eigen::VectorXd lo_;
  Eigen::VectorXd hi_;
  std::vector<std::vector<Eigen::Index>> chains_;
  std::vector<Halfspace> halfspaces_;
};

// f(x, grad) returns the objective and writes the gradient; +inf is allowed.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct PgOptions {
  int max_iterations = 5000;
  double rel_tol = 1e-7;
  double initial_step = 1.0;
  double shrink = 0.5;
  double armijo = 1e-4;
  int max_backtracks = 60;
};

struct PgResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

PgResult projected_gradient(const Objective& f, const Polytope& feasible, Eigen::VectorXd x0,
                            const PgOptions& options = {});

// Smoothed maximum mu * log(sum exp(v / mu)) and its weights (softmax).
double soft_max(const Eigen::VectorXd& v, double mu, Eigen::VectorXd* weights);

}  // namespace reprofile::opt
