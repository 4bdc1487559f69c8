#pragma once

#include <Eigen/Dense>
#include <functional>

namespace pfrlab {

// Objective with gradient: returns f(x) and fills grad (same size as x).
using GradFn =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct LbfgsOptions {
  int max_iters = 1000;
  int history = 10;
  double grad_tol = 1e-8;      // stop when ||g||_inf <= grad_tol
  double f_rel_tol = 0.0;      // optional: stop on tiny relative decrease
  int max_line_search = 50;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  Eigen::VectorXd grad;
  int iterations = 0;
  long n_evals = 0;
  bool converged = false;  // gradient tolerance reached
};

// Limited-memory BFGS with a strong-Wolfe line search. Deterministic:
// fixed evaluation order, no randomness. Flat directions (exact gauge
// freedoms) are harmless since the gradient vanishes along them.
LbfgsResult lbfgs_minimize(const GradFn& fg, Eigen::VectorXd x0,
                           const LbfgsOptions& opts = {});

}  // namespace pfrlab
