#include "pfrlab/optim.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace pfrlab {

LbfgsResult lbfgs_minimize(const GradFn& fg, Eigen::VectorXd x0,
                           const LbfgsOptions& opts) {
  const int n = static_cast<int>(x0.size());
  LbfgsResult res;
  res.x = std::move(x0);
  res.grad.resize(n);

  Eigen::VectorXd g(n), x_new(n), g_new(n);
  res.f = fg(res.x, g);
  res.n_evals = 1;

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  Eigen::VectorXd dir(n), q(n);
  std::vector<double> alpha(opts.history);

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    if (g.cwiseAbs().maxCoeff() <= opts.grad_tol) {
      res.converged = true;
      break;
    }

    // Two-loop recursion.
    q = -g;
    const int m = static_cast<int>(s_hist.size());
    for (int k = m - 1; k >= 0; --k) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= alpha[k] * y_hist[k];
    }
    if (m > 0) {
      const double gamma =
          s_hist[m - 1].dot(y_hist[m - 1]) / y_hist[m - 1].squaredNorm();
      q *= gamma;
    }
    for (int k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha[k] - beta) * s_hist[k];
    }
    dir = q;

    double d0 = g.dot(dir);
    if (!(d0 < 0.0)) {  // not a descent direction; restart with steepest
      dir = -g;
      d0 = g.dot(dir);
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    // Strong Wolfe line search (bracket + zoom).
    const double f0 = res.f;
    double a_prev = 0.0, f_prev = f0;
    double a = 1.0;
    double a_lo = 0.0, a_hi = 0.0, f_lo = 0.0;
    bool bracketed = false, done = false;
    double f_a = f0, d_a = d0;

    for (int ls = 0; ls < opts.max_line_search; ++ls) {
      x_new = res.x + a * dir;
      f_a = fg(x_new, g_new);
      ++res.n_evals;
      d_a = g_new.dot(dir);

      if (f_a > f0 + opts.wolfe_c1 * a * d0 || (ls > 0 && f_a >= f_prev)) {
        a_lo = a_prev; f_lo = f_prev;
        a_hi = a;
        bracketed = true;
        break;
      }
      if (std::abs(d_a) <= -opts.wolfe_c2 * d0) {
        done = true;
        break;
      }
      if (d_a >= 0.0) {
        a_lo = a; f_lo = f_a;
        a_hi = a_prev;
        bracketed = true;
        break;
      }
      a_prev = a; f_prev = f_a;
      a *= 2.0;
    }

    if (bracketed && !done) {
      for (int z = 0; z < opts.max_line_search; ++z) {
        a = 0.5 * (a_lo + a_hi);
        x_new = res.x + a * dir;
        f_a = fg(x_new, g_new);
        ++res.n_evals;
        d_a = g_new.dot(dir);
        if (f_a > f0 + opts.wolfe_c1 * a * d0 || f_a >= f_lo) {
          a_hi = a;
        } else {
          if (std::abs(d_a) <= -opts.wolfe_c2 * d0) {
            done = true;
            break;
          }
          if (d_a * (a_hi - a_lo) >= 0.0) a_hi = a_lo;
          a_lo = a; f_lo = f_a;
        }
        if (std::abs(a_hi - a_lo) < 1e-16 * std::max(1.0, std::abs(a_lo)))
          break;
      }
      if (!done) {
        // Fall back to the best bracketed point.
        a = a_lo > 0.0 ? a_lo : a;
        x_new = res.x + a * dir;
        f_a = fg(x_new, g_new);
        ++res.n_evals;
      }
    }

    if (!(f_a < f0) || !std::isfinite(f_a)) break;  // no further progress

    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm()) {
      if (static_cast<int>(s_hist.size()) == opts.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
    }

    const double f_old = res.f;
    res.x = x_new;
    res.f = f_a;
    g = g_new;
    res.iterations = iter + 1;

    if (opts.f_rel_tol > 0.0 &&
        f_old - res.f <= opts.f_rel_tol * std::max(1.0, std::abs(f_old)))
      break;
  }

  res.grad = g;
  if (g.cwiseAbs().maxCoeff() <= opts.grad_tol) res.converged = true;
  return res;
}

}  // namespace pfrlab
