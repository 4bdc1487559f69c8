#include "pfrlab/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

namespace pfrlab {

using nlohmann::json;

namespace {

constexpr double kProbFloor = 1e-9;

double inv_sqrt2() { return 1.0 / std::sqrt(2.0); }

int pack_size(int n_gates) { return 12 * n_gates + 7; }

Eigen::VectorXd pack(const GateSetModel& m) {
  const int g = static_cast<int>(m.gates.size());
  Eigen::VectorXd x(pack_size(g));
  int at = 0;
  for (int k = 0; k < g; ++k)
    for (int i = 1; i < 4; ++i)
      for (int j = 0; j < 4; ++j) x[at++] = m.gates[k](i, j);
  for (int i = 1; i < 4; ++i) x[at++] = m.rho[i];
  for (int i = 0; i < 4; ++i) x[at++] = m.effect[i];
  return x;
}

void unpack(const Eigen::VectorXd& x, GateSetModel& m) {
  const int g = static_cast<int>(m.gates.size());
  int at = 0;
  for (int k = 0; k < g; ++k) {
    m.gates[k].row(0) << 1, 0, 0, 0;
    for (int i = 1; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m.gates[k](i, j) = x[at++];
  }
  m.rho[0] = inv_sqrt2();
  for (int i = 1; i < 4; ++i) m.rho[i] = x[at++];
  for (int i = 0; i < 4; ++i) m.effect[i] = x[at++];
}

struct SeqData {
  std::vector<std::uint8_t> slots;
  double n = 0, k = 0;
  int power = 0;
};

std::vector<SeqData> build_seqs(const Dataset& dataset,
                                const GstDesign& design) {
  std::vector<SeqData> seqs;
  seqs.reserve(dataset.rows.size());
  for (const auto& row : dataset.rows) {
    if (row.sequence_id < 0 ||
        row.sequence_id >= static_cast<int>(design.sequences.size()))
      throw std::invalid_argument("dataset row references an unknown sequence");
    if (row.k_ones < 0 || row.k_ones > row.n_shots)
      throw std::invalid_argument("dataset row violates 0 <= k <= n");
    const SequenceSpec& spec = design.sequences[row.sequence_id];
    SeqData s;
    s.slots.assign(spec.flat.begin(), spec.flat.end());
    s.n = static_cast<double>(row.n_shots);
    s.k = static_cast<double>(row.k_ones);
    s.power = spec.germ < 0 ? 0 : spec.power;
    seqs.push_back(std::move(s));
  }
  std::stable_sort(seqs.begin(), seqs.end(),
                   [](const SeqData& a, const SeqData& b) {
                     return a.power < b.power;
                   });
  return seqs;
}

// Negative mean log-likelihood and gradient over a prefix of the
// power-sorted sequence list.
class LoglEngine {
 public:
  LoglEngine(const Dataset& dataset, const GstDesign& design)
      : n_gates_(static_cast<int>(design.gate_labels.size())),
        seqs_(build_seqs(dataset, design)) {
    std::size_t max_len = 0;
    for (const auto& s : seqs_) max_len = std::max(max_len, s.slots.size());
    fwd_.resize(max_len + 1);
    scratch_.labels = design.gate_labels;
    scratch_.gates.assign(n_gates_, Ptm::Identity());
  }

  std::size_t prefix_for_power(int cutoff) const {
    std::size_t count = 0;
    while (count < seqs_.size() && seqs_[count].power <= cutoff) ++count;
    return count;
  }

  std::size_t size() const { return seqs_.size(); }

  double shots(std::size_t count) const {
    double total = 0;
    for (std::size_t s = 0; s < count; ++s) total += seqs_[s].n;
    return total;
  }

  // Returns -logL / total_shots; fills grad (same scaling) when non-null.
  double eval(const Eigen::VectorXd& x, Eigen::VectorXd* grad,
              std::size_t count) {
    unpack(x, scratch_);
    const int np = pack_size(n_gates_);
    if (grad) grad->setZero(np);

    double logl = 0.0;
    for (std::size_t si = 0; si < count; ++si) {
      const SeqData& s = seqs_[si];
      const std::size_t len = s.slots.size();
      fwd_[0] = scratch_.rho;
      for (std::size_t t = 0; t < len; ++t)
        fwd_[t + 1] = scratch_.gates[s.slots[t]] * fwd_[t];
      const double raw = scratch_.effect.dot(fwd_[len]);
      const double p = std::min(1.0 - kProbFloor, std::max(kProbFloor, raw));
      if (s.k > 0) logl += s.k * std::log(p);
      if (s.n - s.k > 0) logl += (s.n - s.k) * std::log1p(-p);
      // Quadratic restoring force outside [0, 1]: the clamped logs are
      // flat there, which otherwise lets whole rows float freely once the
      // (TP-only) parameterization predicts unphysical probabilities.
      double w = 0.0;
      if (raw < 0.0) {
        logl -= s.n * raw * raw;
        w = -2.0 * s.n * raw;
      } else if (raw > 1.0) {
        logl -= s.n * (raw - 1.0) * (raw - 1.0);
        w = -2.0 * s.n * (raw - 1.0);
      } else if (raw > kProbFloor && raw < 1.0 - kProbFloor) {
        w = s.k / p - (s.n - s.k) / (1.0 - p);
      }
      if (!grad || w == 0.0) continue;

      // d p / d effect = fwd[len]; accumulate into the SPAM block.
      for (int i = 0; i < 4; ++i)
        (*grad)[12 * n_gates_ + 3 + i] += w * fwd_[len][i];
      Bloch4 back = scratch_.effect;
      for (std::size_t t = len; t-- > 0;) {
        const int slot = s.slots[t];
        const int base = 12 * slot;
        for (int i = 1; i < 4; ++i) {
          const double wb = w * back[i];
          if (wb != 0.0) {
            (*grad)[base + (i - 1) * 4 + 0] += wb * fwd_[t][0];
            (*grad)[base + (i - 1) * 4 + 1] += wb * fwd_[t][1];
            (*grad)[base + (i - 1) * 4 + 2] += wb * fwd_[t][2];
            (*grad)[base + (i - 1) * 4 + 3] += wb * fwd_[t][3];
          }
        }
        back = scratch_.gates[slot].transpose() * back;
      }
      for (int i = 1; i < 4; ++i)
        (*grad)[12 * n_gates_ + (i - 1)] += w * back[i];
    }

    const double total = shots_cache(count);
    if (grad) *grad = -(*grad) / total;
    return -logl / total;
  }

  double shots_cache(std::size_t count) {
    if (count != cached_count_) {
      cached_shots_ = shots(count);
      cached_count_ = count;
    }
    return cached_shots_;
  }

 private:
  int n_gates_;
  std::vector<SeqData> seqs_;
  std::vector<Bloch4> fwd_;
  GateSetModel scratch_;
  std::size_t cached_count_ = static_cast<std::size_t>(-1);
  double cached_shots_ = 0;
};

int numerical_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int rank = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv[k] > 1e-8 * sv[0]) ++rank;
  return rank;
}

// Column k of the gauge-action Jacobian: the packed model direction of
// the infinitesimal gauge K = E_(a,b), a in {1,2,3}.
Eigen::MatrixXd gauge_jacobian(const GateSetModel& m) {
  const int g = static_cast<int>(m.gates.size());
  const int np = pack_size(g);
  Eigen::MatrixXd jac(np, 12);
  int col = 0;
  for (int a = 1; a < 4; ++a)
    for (int b = 0; b < 4; ++b, ++col) {
      Ptm k_dir = Ptm::Zero();
      k_dir(a, b) = 1.0;
      GateSetModel d = m;
      for (int q = 0; q < g; ++q)
        d.gates[q] = k_dir * m.gates[q] - m.gates[q] * k_dir;
      d.rho = k_dir * m.rho;
      d.effect = -k_dir.transpose() * m.effect;
      Eigen::VectorXd packed = pack(d);
      jac.col(col) = packed;
    }
  return jac;
}

// Tangent basis of the Clifford-times-Pauli-channel manifold at `m`.
Eigen::MatrixXd h2_tangent(const GateSetModel& m, const GstDesign& design) {
  const int g = static_cast<int>(m.gates.size());
  const int np = pack_size(g);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(np, 3 * g + 7);
  int col = 0;
  for (int q = 0; q < g; ++q) {
    const Ptm target = ptm_of_clifford(design.gate_set.at(q));
    for (int i = 1; i < 4; ++i, ++col) {
      for (int j = 0; j < 4; ++j)
        if (target(i, j) != 0.0)
          jac(12 * q + (i - 1) * 4 + j, col) = target(i, j);
    }
  }
  for (int i = 0; i < 3; ++i, ++col) jac(12 * g + i, col) = 1.0;
  for (int i = 0; i < 4; ++i, ++col) jac(12 * g + 3 + i, col) = 1.0;
  return jac;
}

}  // namespace

GateSetModel ideal_target_model(const GstDesign& design) {
  GateSetModel m;
  m.labels = design.gate_labels;
  for (const Clifford c : design.gate_set) m.gates.push_back(ptm_of_clifford(c));
  m.param_count = pack_size(static_cast<int>(m.gates.size()));
  return m;
}

std::pair<double, long> fit_h0(const Dataset& dataset) {
  double logl = 0.0;
  for (const auto& row : dataset.rows) {
    if (row.n_shots < 1)
      throw std::invalid_argument("fit_h0 needs n >= 1 per row");
    const double n = static_cast<double>(row.n_shots);
    const double k = static_cast<double>(row.k_ones);
    if (k > 0) logl += k * std::log(k / n);
    if (n - k > 0) logl += (n - k) * std::log((n - k) / n);
  }
  return {logl, static_cast<long>(dataset.rows.size())};
}

std::vector<double> model_probabilities(const Dataset& dataset,
                                        const GstDesign& design,
                                        const GateSetModel& model) {
  std::vector<double> ps;
  ps.reserve(dataset.rows.size());
  for (const auto& row : dataset.rows) {
    const SequenceSpec& spec = design.sequences.at(row.sequence_id);
    Bloch4 v = model.rho;
    for (int slot : spec.flat) v = model.gates.at(slot) * v;
    ps.push_back(std::min(1.0, std::max(0.0, model.effect.dot(v))));
  }
  return ps;
}

double dataset_loglik(const Dataset& dataset, const GstDesign& design,
                      const GateSetModel& model) {
  const std::vector<double> ps = model_probabilities(dataset, design, model);
  double logl = 0.0;
  for (std::size_t s = 0; s < ps.size(); ++s) {
    const double p =
        std::min(1.0 - kProbFloor, std::max(kProbFloor, ps[s]));
    const double k = static_cast<double>(dataset.rows[s].k_ones);
    const double n = static_cast<double>(dataset.rows[s].n_shots);
    if (k > 0) logl += k * std::log(p);
    if (n - k > 0) logl += (n - k) * std::log1p(-p);
  }
  return logl;
}

GateSetModel lgst_seed(const Dataset& dataset, const GstDesign& design) {
  std::map<std::vector<int>, double> prob;
  for (const auto& row : dataset.rows) {
    if (row.n_shots < 1)
      throw std::runtime_error("informationally incomplete data");
    prob[design.sequences.at(row.sequence_id).flat] =
        static_cast<double>(row.k_ones) / static_cast<double>(row.n_shots);
  }
  const auto lookup = [&](const std::vector<int>& flat) {
    const auto it = prob.find(flat);
    if (it == prob.end())
      throw std::runtime_error("informationally incomplete data");
    return it->second;
  };

  const int nf = static_cast<int>(design.prep_fiducials.size());
  int prep_empty = -1, meas_empty = -1;
  for (int k = 0; k < nf; ++k) {
    if (design.prep_fiducials[k].empty()) prep_empty = k;
    if (design.meas_fiducials[k].empty()) meas_empty = k;
  }
  if (prep_empty < 0 || meas_empty < 0)
    throw std::runtime_error("informationally incomplete data");

  Eigen::MatrixXd gram(nf, nf);
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j)
      gram(i, j) = lookup(
          expand(design.prep_fiducials[j], {}, 0, design.meas_fiducials[i]));

  const int n_gates = static_cast<int>(design.gate_labels.size());
  std::vector<Eigen::MatrixXd> sandwich(n_gates, Eigen::MatrixXd(nf, nf));
  for (int g = 0; g < n_gates; ++g) {
    const std::vector<int> germ = {g};
    for (int i = 0; i < nf; ++i)
      for (int j = 0; j < nf; ++j)
        sandwich[g](i, j) = lookup(expand(design.prep_fiducials[j], germ, 1,
                                          design.meas_fiducials[i]));
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      gram, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv[3] <= 0.0 || sv[0] / sv[3] > 1e8)
    throw std::runtime_error("informationally incomplete data");
  const Eigen::MatrixXd u4 = svd.matrixU().leftCols(4);
  const Eigen::MatrixXd v4 = svd.matrixV().leftCols(4);
  const Eigen::Vector4d s4 = sv.head(4);

  GateSetModel m;
  m.labels = design.gate_labels;
  m.gates.resize(n_gates);
  for (int g = 0; g < n_gates; ++g)
    m.gates[g] =
        s4.cwiseInverse().asDiagonal() * u4.transpose() * sandwich[g] * v4;
  const Eigen::Vector4d rho_hat =
      s4.cwiseInverse().asDiagonal() * u4.transpose() * gram.col(prep_empty);
  const Eigen::Vector4d eff_hat = v4.transpose() * gram.row(meas_empty).transpose();
  m.rho = rho_hat;
  m.effect = eff_hat;

  // The inversion frame is S = P V4 with P the (unknown) true fiducial
  // states. Substituting the target states for P yields a computable
  // frame change that lands the estimate next to the target gauge; for
  // exact target-generated data it recovers the gates exactly.
  Eigen::MatrixXd p_target(4, nf);
  for (int j = 0; j < nf; ++j) {
    Bloch4 v = state_zero();
    for (int slot : design.prep_fiducials[j])
      v = ptm_of_clifford(design.gate_set.at(slot)) * v;
    p_target.col(j) = v;
  }
  const Ptm frame = p_target * v4;
  if (std::abs(frame.determinant()) < 1e-9)
    throw std::runtime_error("informationally incomplete data");
  const Ptm frame_inv = frame.inverse();
  for (Ptm& r : m.gates) r = frame * r * frame_inv;
  m.rho = frame * m.rho;
  m.effect = frame_inv.transpose() * m.effect;

  // Move into the trace-preserving gauge: the common left eigenvector of
  // the estimated gates (eigenvalue 1) becomes the first coordinate.
  Ptm avg = Ptm::Zero();
  for (const Ptm& r : m.gates) avg += r;
  avg /= static_cast<double>(n_gates);
  Eigen::EigenSolver<Eigen::Matrix4d> es(avg.transpose());
  int best = 0;
  for (int k = 1; k < 4; ++k)
    if (std::abs(es.eigenvalues()[k] - 1.0) <
        std::abs(es.eigenvalues()[best] - 1.0))
      best = k;
  Eigen::Vector4d v = es.eigenvectors().col(best).real();
  const double overlap = v.dot(m.rho);
  if (std::abs(overlap) < 1e-9)
    throw std::runtime_error("informationally incomplete data");
  v *= inv_sqrt2() / overlap;

  Ptm gauge = Ptm::Identity();
  gauge.row(0) = v.transpose();
  if (std::abs(gauge.determinant()) < 1e-9)
    throw std::runtime_error("informationally incomplete data");
  const Ptm gauge_inv = gauge.inverse();
  for (Ptm& r : m.gates) {
    r = gauge * r * gauge_inv;
    r.row(0) << 1, 0, 0, 0;  // exact TP
  }
  m.rho = gauge * m.rho;
  m.rho[0] = inv_sqrt2();
  m.effect = gauge_inv.transpose() * m.effect;
  m.param_count = pack_size(n_gates);
  return m;
}

MleFit fit_h1_mle(const Dataset& dataset, const GstDesign& design,
                  const GateSetModel& seed, const MleOptions& opts) {
  if (seed.gates.size() != design.gate_labels.size())
    throw std::invalid_argument("seed model does not match the design");

  LoglEngine engine(dataset, design);
  Eigen::VectorXd x = pack(seed);

  std::vector<std::size_t> stage_counts;
  if (opts.progressive) {
    for (int cutoff : design.max_lengths) {
      const std::size_t c = engine.prefix_for_power(cutoff);
      if (c > 0 && (stage_counts.empty() || c > stage_counts.back()))
        stage_counts.push_back(c);
    }
  }
  if (stage_counts.empty() || stage_counts.back() != engine.size())
    stage_counts.push_back(engine.size());

  MleFit fit;
  for (std::size_t stage = 0; stage < stage_counts.size(); ++stage) {
    const std::size_t count = stage_counts[stage];
    const bool final_stage = stage + 1 == stage_counts.size();
    const GradFn fg = [&](const Eigen::VectorXd& xx, Eigen::VectorXd& gg) {
      return engine.eval(xx, &gg, count);
    };
    LbfgsOptions lopts;
    lopts.max_iters = final_stage ? opts.max_iters_final : opts.max_iters_stage;
    lopts.grad_tol = final_stage ? opts.grad_tol : 10 * opts.grad_tol;
    const LbfgsResult r = lbfgs_minimize(fg, x, lopts);
    x = r.x;
    fit.iterations += r.iterations;
    fit.n_evals += r.n_evals;
    if (final_stage) fit.converged = r.converged;
  }

  fit.model = seed;
  unpack(x, fit.model);
  fit.model.param_count = pack_size(static_cast<int>(fit.model.gates.size()));
  // Move to the target-aligned gauge (likelihood-invariant) so the CP
  // projection acts on the physically meaningful representative; complete
  // positivity is not a gauge-invariant property.
  try {
    fit.model = gauge_optimize(fit.model, ideal_target_model(design));
  } catch (const std::runtime_error&) {
    // Keep the raw gauge when no well-conditioned alignment exists.
  }
  if (opts.cptp_projection)
    for (Ptm& r : fit.model.gates) r = project_to_cptp(r);
  fit.logl = dataset_loglik(dataset, design, fit.model);
  return fit;
}

Eigen::Vector4d project_to_simplex(const Eigen::Vector4d& v) {
  std::array<double, 4> u{v[0], v[1], v[2], v[3]};
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0, theta = 0.0;
  int support = 0;
  for (int k = 0; k < 4; ++k) {
    cumsum += u[k];
    const double t = (cumsum - 1.0) / (k + 1);
    if (u[k] - t > 0.0) {
      support = k + 1;
      theta = t;
    }
  }
  (void)support;
  Eigen::Vector4d out;
  for (int k = 0; k < 4; ++k) out[k] = std::max(v[k] - theta, 0.0);
  return out;
}

GateSetModel project_h2(const GateSetModel& model, const GstDesign& design) {
  if (model.gates.size() != design.gate_set.size())
    throw std::invalid_argument("model does not match the design");
  GateSetModel out = model;
  for (std::size_t g = 0; g < model.gates.size(); ++g) {
    const Ptm target = ptm_of_clifford(design.gate_set[g]);
    Eigen::Vector4d lambda;
    lambda[0] = 1.0;
    int cols[4] = {0, -1, -1, -1};
    for (int i = 1; i < 4; ++i) {
      for (int j = 0; j < 4; ++j)
        if (target(i, j) != 0.0) cols[i] = j;
      lambda[i] = model.gates[g](i, cols[i]) * target(i, cols[i]);
    }
    const Eigen::Vector4d probs =
        project_to_simplex(pauli_probs_from_eigenvalues(lambda));
    const Eigen::Vector4d fixed = eigenvalues_from_pauli_probs(probs);
    Ptm r = Ptm::Zero();
    r(0, 0) = 1.0;
    for (int i = 1; i < 4; ++i) r(i, cols[i]) = fixed[i] * target(i, cols[i]);
    out.gates[g] = r;
  }
  return out;
}

GateSetModel gauge_optimize(const GateSetModel& model,
                            const GateSetModel& target) {
  if (model.gates.size() != target.gates.size())
    throw std::invalid_argument("gauge_optimize: gate count mismatch");
  const int n_gates = static_cast<int>(model.gates.size());

  const auto build = [](const Eigen::VectorXd& x) {
    Ptm g = Ptm::Identity();
    int at = 0;
    for (int i = 1; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g(i, j) += x[at++];
    return g;
  };

  // Gate mismatch plus SPAM mismatch. The SPAM terms transform as G and
  // G^-T, which anchors the scale of G: the bare similarity objective has
  // spurious minimizers with det G -> 0 (similarity transforms do not
  // preserve the Frobenius norm), and those blow the effect term up.
  const GradFn fg = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    const Ptm g = build(x);
    const double det = g.determinant();
    grad.setZero(12);
    if (std::abs(det) < 1e-12) return 1e50;
    const Ptm ginv = g.inverse();
    Ptm grad4 = Ptm::Zero();
    double f = 0.0;
    for (int q = 0; q < n_gates; ++q) {
      const Ptm rg = model.gates[q] * ginv;
      const Ptm m = g * rg;
      const Ptm diff = m - target.gates[q];
      f += diff.squaredNorm();
      grad4 += 2.0 * (diff * rg.transpose() -
                      m.transpose() * diff * ginv.transpose());
    }
    const Bloch4 rho_diff = g * model.rho - target.rho;
    f += rho_diff.squaredNorm();
    grad4 += 2.0 * rho_diff * model.rho.transpose();
    const Bloch4 eff = ginv.transpose() * model.effect;
    const Bloch4 eff_diff = eff - target.effect;
    f += eff_diff.squaredNorm();
    grad4 += -2.0 * eff * eff_diff.transpose() * ginv.transpose();
    int at = 0;
    for (int i = 1; i < 4; ++i)
      for (int j = 0; j < 4; ++j) grad[at++] = grad4(i, j);
    return f;
  };

  LbfgsOptions opts;
  opts.max_iters = 2000;
  opts.grad_tol = 1e-12;
  const LbfgsResult r = lbfgs_minimize(fg, Eigen::VectorXd::Zero(12), opts);

  const Ptm g = build(r.x);
  if (std::abs(g.determinant()) < 1e-6)
    throw std::runtime_error("ill-conditioned gauge rejected");
  const Ptm ginv = g.inverse();
  GateSetModel out = model;
  for (Ptm& rg : out.gates) {
    rg = g * rg * ginv;
    rg.row(0) << 1, 0, 0, 0;
  }
  out.rho = g * model.rho;
  out.rho[0] = inv_sqrt2();
  out.effect = ginv.transpose() * model.effect;
  return out;
}

double n_sigma(double logl_alt, double logl_null, long dof_alt,
               long dof_null) {
  const long k = dof_null - dof_alt;
  if (k <= 0) throw std::invalid_argument("n_sigma needs dof_null > dof_alt");
  const double llr = 2.0 * (logl_null - logl_alt);
  return (llr - static_cast<double>(k)) /
         std::sqrt(2.0 * static_cast<double>(k));
}

long model_dof(Hypothesis h, const GstDesign& design, const GateSetModel& at,
               int* gauge_rank_out) {
  if (h == Hypothesis::H0) {
    if (gauge_rank_out) *gauge_rank_out = 0;
    return static_cast<long>(design.sequences.size());
  }
  const int n_gates = static_cast<int>(at.gates.size());
  const Eigen::MatrixXd jg = gauge_jacobian(at);
  if (h == Hypothesis::H1) {
    const int rank = numerical_rank(jg);
    if (gauge_rank_out) *gauge_rank_out = rank;
    return pack_size(n_gates) - rank;
  }
  const Eigen::MatrixXd jt = h2_tangent(at, design);
  Eigen::MatrixXd joined(jg.rows(), jg.cols() + jt.cols());
  joined << jg, jt;
  const int residual =
      numerical_rank(jg) + numerical_rank(jt) - numerical_rank(joined);
  if (gauge_rank_out) *gauge_rank_out = residual;
  return 3 * n_gates + 7 - residual;
}

AnalysisResult analyze_dataset(const Dataset& dataset, const GstDesign& design,
                               const MleOptions& opts) {
  AnalysisResult out;
  const auto [logl0, dof0] = fit_h0(dataset);
  const GateSetModel seed = lgst_seed(dataset, design);
  MleFit fit = fit_h1_mle(dataset, design, seed, opts);
  out.h1 = std::move(fit.model);
  out.h2 = project_h2(out.h1, design);

  int rank1 = 0, rank2 = 0;
  const long dof1 = model_dof(Hypothesis::H1, design, out.h1, &rank1);
  const long dof2 = model_dof(Hypothesis::H2, design, out.h2, &rank2);
  out.h1.gauge_dim = rank1;
  out.h2.gauge_dim = rank2;

  out.report.logl_h0 = logl0;
  out.report.logl_h1 = fit.logl;
  out.report.logl_h2 = dataset_loglik(dataset, design, out.h2);
  out.report.dof_h0 = dof0;
  out.report.dof_h1 = dof1;
  out.report.dof_h2 = dof2;
  out.report.gauge_rank_h1 = rank1;
  out.report.gauge_rank_h2 = rank2;
  out.report.n_sigma_h1 = n_sigma(out.report.logl_h1, logl0, dof1, dof0);
  out.report.n_sigma_h2 = n_sigma(out.report.logl_h2, logl0, dof2, dof0);
  return out;
}

std::string model_to_json(const GateSetModel& m) {
  json j;
  j["labels"] = m.labels;
  json gates = json::array();
  for (const Ptm& r : m.gates) {
    json rows = json::array();
    for (int i = 0; i < 4; ++i)
      for (int jj = 0; jj < 4; ++jj) rows.push_back(r(i, jj));
    gates.push_back(rows);
  }
  j["gates"] = gates;
  j["rho"] = {m.rho[0], m.rho[1], m.rho[2], m.rho[3]};
  j["effect"] = {m.effect[0], m.effect[1], m.effect[2], m.effect[3]};
  j["param_count"] = m.param_count;
  j["gauge_dim"] = m.gauge_dim;
  return j.dump(1);
}

GateSetModel model_from_json(const std::string& text) {
  const json j = json::parse(text);
  GateSetModel m;
  m.labels = j.at("labels").get<std::vector<std::string>>();
  for (const auto& rows : j.at("gates")) {
    if (rows.size() != 16)
      throw std::invalid_argument("gate matrix must have 16 entries");
    Ptm r;
    int at = 0;
    for (int i = 0; i < 4; ++i)
      for (int jj = 0; jj < 4; ++jj) r(i, jj) = rows[at++].get<double>();
    m.gates.push_back(r);
  }
  const auto rho = j.at("rho").get<std::vector<double>>();
  const auto eff = j.at("effect").get<std::vector<double>>();
  for (int i = 0; i < 4; ++i) {
    m.rho[i] = rho.at(i);
    m.effect[i] = eff.at(i);
  }
  m.param_count = j.value("param_count", 0);
  m.gauge_dim = j.value("gauge_dim", 0);
  return m;
}

void save_model(const GateSetModel& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << model_to_json(m) << '\n';
}

GateSetModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return model_from_json(std::string((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>()));
}

std::string fit_report_to_json(const FitReport& r) {
  json j;
  j["logl_h0"] = r.logl_h0;
  j["logl_h1"] = r.logl_h1;
  j["logl_h2"] = r.logl_h2;
  j["dof_h0"] = r.dof_h0;
  j["dof_h1"] = r.dof_h1;
  j["dof_h2"] = r.dof_h2;
  j["n_sigma_h1"] = r.n_sigma_h1;
  j["n_sigma_h2"] = r.n_sigma_h2;
  j["gauge_rank_h1"] = r.gauge_rank_h1;
  j["gauge_rank_h2"] = r.gauge_rank_h2;
  return j.dump(1);
}

FitReport fit_report_from_json(const std::string& text) {
  const json j = json::parse(text);
  FitReport r;
  r.logl_h0 = j.at("logl_h0").get<double>();
  r.logl_h1 = j.at("logl_h1").get<double>();
  r.logl_h2 = j.at("logl_h2").get<double>();
  r.dof_h0 = j.at("dof_h0").get<long>();
  r.dof_h1 = j.at("dof_h1").get<long>();
  r.dof_h2 = j.at("dof_h2").get<long>();
  r.n_sigma_h1 = j.at("n_sigma_h1").get<double>();
  r.n_sigma_h2 = j.at("n_sigma_h2").get<double>();
  r.gauge_rank_h1 = j.value("gauge_rank_h1", 0);
  r.gauge_rank_h2 = j.value("gauge_rank_h2", 0);
  return r;
}

}  // namespace pfrlab
