#include "pfrlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "pfrlab/util.hpp"

namespace pfrlab {

using nlohmann::json;

double avg_gate_infidelity(const Ptm& r, const Ptm& target) {
  if (std::abs(target.determinant()) < 1e-9)
    throw std::invalid_argument("singular target");
  const double fidelity = ((target.inverse() * r).trace() + 2.0) / 6.0;
  return 1.0 - fidelity;
}

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::Vector4cd;
using std::complex;

Matrix2cd pauli_matrix(int p) {
  const complex<double> i(0.0, 1.0);
  Matrix2cd m;
  switch (p) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Action of the map with transfer matrix `delta` on the matrix units
// |s><s'|: E(rho) = (1/2) sum_ij delta_ij P_i Tr[P_j rho].
struct UnitImages {
  Matrix2cd m[2][2];

  explicit UnitImages(const Ptm& delta) {
    for (int s = 0; s < 2; ++s)
      for (int sp = 0; sp < 2; ++sp) {
        Matrix2cd acc = Matrix2cd::Zero();
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            if (delta(i, j) == 0.0) continue;
            acc += (0.5 * delta(i, j)) * pauli_matrix(i) *
                   pauli_matrix(j)(sp, s);
          }
        m[s][sp] = acc;
      }
  }
};

// Joint index (system s, reference r) -> 2 s + r.
Matrix4cd apply_extended(const UnitImages& images, const Vector4cd& psi) {
  Matrix4cd x = Matrix4cd::Zero();
  for (int s = 0; s < 2; ++s)
    for (int r = 0; r < 2; ++r)
      for (int sp = 0; sp < 2; ++sp)
        for (int rp = 0; rp < 2; ++rp) {
          const complex<double> coeff =
              psi[2 * s + r] * std::conj(psi[2 * sp + rp]);
          if (coeff == 0.0) continue;
          const Matrix2cd& img = images.m[s][sp];
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              x(2 * a + r, 2 * b + rp) += coeff * img(a, b);
        }
  return x;
}

}  // namespace

double diamond_objective(const Ptm& delta, const Vector4cd& psi) {
  const UnitImages images(delta);
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(apply_extended(images, psi));
  return es.eigenvalues().cwiseAbs().sum();
}

double diamond_distance(const Ptm& r, const Ptm& target,
                        const DiamondOptions& opts) {
  const Ptm delta = r - target;
  if (delta.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const UnitImages images(delta);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = 0.0;

  for (int start = 0; start < std::max(1, opts.starts); ++start) {
    Vector4cd psi;
    if (start == 0) {
      // Maximally entangled input; optimal for Pauli-channel differences.
      psi << 1, 0, 0, 1;
      psi /= std::sqrt(2.0);
    } else {
      for (int k = 0; k < 4; ++k)
        psi[k] = complex<double>(gauss(rng), gauss(rng));
      psi.normalize();
    }

    double f = 0.0;
    {
      Eigen::SelfAdjointEigenSolver<Matrix4cd> es(
          apply_extended(images, psi));
      f = es.eigenvalues().cwiseAbs().sum();
    }
    for (int iter = 0; iter < opts.max_iters; ++iter) {
      // Fix the dual sign operator, then take the best state for it:
      // psi+ Q psi = Tr[S (Delta x id)(psi psi+)] is maximized by the top
      // eigenvector, and the true objective can only grow.
      const Matrix4cd x = apply_extended(images, psi);
      Eigen::SelfAdjointEigenSolver<Matrix4cd> es(x);
      Matrix4cd sign_op = Matrix4cd::Zero();
      for (int k = 0; k < 4; ++k) {
        const double ev = es.eigenvalues()[k];
        if (ev != 0.0)
          sign_op += (ev > 0 ? 1.0 : -1.0) * es.eigenvectors().col(k) *
                     es.eigenvectors().col(k).adjoint();
      }
      Matrix4cd q = Matrix4cd::Zero();
      for (int s = 0; s < 2; ++s)
        for (int rr = 0; rr < 2; ++rr)
          for (int sp = 0; sp < 2; ++sp)
            for (int rp = 0; rp < 2; ++rp) {
              complex<double> acc = 0.0;
              const Matrix2cd& img = images.m[s][sp];
              for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                  acc += img(a, b) * sign_op(2 * b + rp, 2 * a + rr);
              q(2 * sp + rp, 2 * s + rr) = acc;
            }
      q = (0.5 * (q + q.adjoint())).eval();
      Eigen::SelfAdjointEigenSolver<Matrix4cd> qes(q);
      Vector4cd psi_next = qes.eigenvectors().col(3);
      psi_next.normalize();

      Eigen::SelfAdjointEigenSolver<Matrix4cd> es2(
          apply_extended(images, psi_next));
      const double f_next = es2.eigenvalues().cwiseAbs().sum();
      if (f_next <= f + opts.tol * std::max(1.0, f)) {
        if (f_next > f) {
          f = f_next;
          psi = psi_next;
        }
        break;
      }
      f = f_next;
      psi = psi_next;
    }
    best = std::max(best, f);
  }
  return best;
}

std::map<std::string, std::array<double, 2>> bootstrap_ci(
    const Estimator& estimator, const Dataset& base,
    const std::vector<double>& model_probs, const BootstrapOptions& opts) {
  if (opts.n_resamples < 100)
    throw std::invalid_argument("bootstrap needs n_resamples >= 100");
  if (model_probs.size() != base.rows.size())
    throw std::invalid_argument("one model probability per dataset row");

  const int n = opts.n_resamples;
  std::vector<NamedValues> results(n);

  const auto run_one = [&](int resample) {
    Dataset ds = base;
    std::mt19937_64 eng(derive_seed(opts.seed, 0xb007, resample));
    for (std::size_t row = 0; row < ds.rows.size(); ++row) {
      const double p =
          std::min(1.0 - 1e-12, std::max(1e-12, model_probs[row]));
      std::binomial_distribution<long> bin(ds.rows[row].n_shots, p);
      ds.rows[row].k_ones = bin(eng);
    }
    results[resample] = estimator(ds);
  };

  const unsigned n_threads =
      std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
  if (n_threads <= 1) {
    for (int k = 0; k < n; ++k) run_one(k);
  } else {
    std::vector<std::future<void>> futures;
    for (unsigned t = 0; t < n_threads; ++t)
      futures.push_back(std::async(std::launch::async, [&, t] {
        for (int k = static_cast<int>(t); k < n;
             k += static_cast<int>(n_threads))
          run_one(k);
      }));
    for (auto& f : futures) f.get();
  }

  std::map<std::string, std::array<double, 2>> out;
  for (const auto& [name, unused] : results[0]) {
    (void)unused;
    std::vector<double> values;
    values.reserve(n);
    for (const auto& r : results) values.push_back(r.at(name));
    std::sort(values.begin(), values.end());
    const int lo = static_cast<int>(std::floor(0.025 * (n - 1)));
    const int hi = static_cast<int>(std::ceil(0.975 * (n - 1)));
    out[name] = {values[lo], values[hi]};
  }
  return out;
}

MetricsReport compute_metrics(const GateSetModel& model,
                              const GateSetModel& target,
                              const DiamondOptions& opts) {
  if (model.gates.size() != target.gates.size())
    throw std::invalid_argument("compute_metrics: gate count mismatch");
  MetricsReport report;
  for (std::size_t g = 0; g < model.gates.size(); ++g) {
    GateMetrics gm;
    gm.label = g < model.labels.size() ? model.labels[g] : "G" + std::to_string(g);
    gm.infidelity = avg_gate_infidelity(model.gates[g], target.gates[g]);
    gm.diamond = diamond_distance(model.gates[g], target.gates[g], opts);
    report.gates.push_back(gm);
  }
  return report;
}

std::string metrics_to_json(const MetricsReport& r) {
  json j;
  j["diamond_convention"] = r.diamond_convention;
  j["gauge_note"] = r.gauge_note;
  json gates = json::array();
  for (const auto& g : r.gates) {
    json e;
    e["gate"] = g.label;
    e["infidelity"] = g.infidelity;
    e["diamond"] = g.diamond;
    if (!std::isnan(g.infidelity_ci[0])) {
      e["infidelity_ci"] = {g.infidelity_ci[0], g.infidelity_ci[1]};
      e["diamond_ci"] = {g.diamond_ci[0], g.diamond_ci[1]};
    }
    gates.push_back(e);
  }
  j["gates"] = gates;
  return j.dump(1);
}

}  // namespace pfrlab
