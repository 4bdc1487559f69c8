#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "pfrlab/design.hpp"
#include "pfrlab/noise.hpp"
#include "pfrlab/optim.hpp"

namespace pfrlab {

// A gate-set estimate: one transfer matrix per design gate label plus
// SPAM. Gates are trace preserving (first row (1,0,0,0)); complete
// positivity is enforced by a final projection after fitting, not during.
struct GateSetModel {
  std::vector<std::string> labels;
  std::vector<Ptm> gates;
  Bloch4 rho = state_zero();
  Bloch4 effect = effect_one();
  int param_count = 0;  // 12 per gate + 3 (rho) + 4 (effect)
  int gauge_dim = 0;    // numerical gauge rank at this estimate, if computed
};

// Targets with ideal SPAM for a design's gate set.
GateSetModel ideal_target_model(const GstDesign& design);

struct FitReport {
  double logl_h0 = 0.0, logl_h1 = 0.0, logl_h2 = 0.0;
  long dof_h0 = 0, dof_h1 = 0, dof_h2 = 0;
  double n_sigma_h1 = 0.0, n_sigma_h2 = 0.0;
  // dof-convention sensitivity: the numerical gauge ranks subtracted.
  int gauge_rank_h1 = 0, gauge_rank_h2 = 0;
};

// Saturated per-sequence binomial fit: logL = sum_s k log(k/n) +
// (n-k) log(1-k/n) with 0 log 0 = 0; dof = number of sequences.
std::pair<double, long> fit_h0(const Dataset& dataset);

// Binomial log-likelihood of a model on a dataset, probabilities clamped
// to [1e-9, 1 - 1e-9] inside the logs.
double dataset_loglik(const Dataset& dataset, const GstDesign& design,
                      const GateSetModel& model);

// Model-predicted outcome probabilities, one per dataset row.
std::vector<double> model_probabilities(const Dataset& dataset,
                                        const GstDesign& design,
                                        const GateSetModel& model);

// Linear-inversion seed from the 36 fiducial-pair and single-gate
// sandwich sequences, moved into the trace-preserving gauge. Throws
// std::runtime_error("informationally incomplete data") when the fiducial
// Gram matrix is singular (condition number > 1e8) or rows are missing.
GateSetModel lgst_seed(const Dataset& dataset, const GstDesign& design);

struct MleOptions {
  bool progressive = true;     // fit on growing germ-power subsets
  int max_iters_stage = 300;   // L-BFGS iterations per refinement stage
  int max_iters_final = 4000;  // iterations for the full-data stage
  double grad_tol = 1e-7;      // on the per-shot normalized objective
  bool cptp_projection = true; // project each gate to CPTP at the end
};

struct MleFit {
  GateSetModel model;
  double logl = 0.0;  // log-likelihood of the returned (projected) model
  bool converged = false;
  int iterations = 0;
  long n_evals = 0;
};

// Maximum-likelihood fit of the Markovian CPTP hypothesis with
// progressive refinement over germ powers, warm-started from `seed`.
// Deterministic given dataset and seed model.
MleFit fit_h1_mle(const Dataset& dataset, const GstDesign& design,
                  const GateSetModel& seed, const MleOptions& opts = {});

// Euclidean projection onto the probability simplex (sort-based).
Eigen::Vector4d project_to_simplex(const Eigen::Vector4d& v);

// Projection of an H1 estimate onto Clifford-times-Pauli-channel form:
// entries that vanish in the target monomial are zeroed, the surviving
// entries are mapped to Pauli eigenvalues, pulled onto the simplex in
// probability coordinates, and written back. SPAM is kept unchanged.
GateSetModel project_h2(const GateSetModel& model, const GstDesign& design);

// Minimize the Frobenius mismatch of gates (and SPAM, which anchors the
// gauge scale) over trace-preserving gauge transforms G (first row
// fixed), seeded at the identity. The transform R -> G R G^-1,
// rho -> G rho, effect -> G^-T effect leaves predicted probabilities
// invariant. Throws std::runtime_error when the optimal gauge is
// ill-conditioned (|det G| < 1e-6).
GateSetModel gauge_optimize(const GateSetModel& model,
                            const GateSetModel& target);

// (LLR - k) / sqrt(2k) with k = dof_null - dof_alt and
// LLR = 2 (logl_null - logl_alt). Throws std::invalid_argument on k <= 0.
double n_sigma(double logl_alt, double logl_null, long dof_alt,
               long dof_null);

enum class Hypothesis { H0, H1, H2 };

// Identifiable parameter counts. H0: sequence count. H1: 12 per gate + 7
// SPAM minus the numerical rank of the gauge-action Jacobian at `at`.
// H2: 3 per gate + 7 SPAM minus the rank of the gauge directions that are
// tangent to the generalized-monomial manifold at `at`. Ranks use
// singular values > 1e-8 * max.
long model_dof(Hypothesis h, const GstDesign& design, const GateSetModel& at,
               int* gauge_rank_out = nullptr);

struct AnalysisResult {
  FitReport report;
  GateSetModel h1;  // CPTP-projected MLE
  GateSetModel h2;  // monomial projection of h1
};

// The full nested-hypothesis analysis of one dataset.
AnalysisResult analyze_dataset(const Dataset& dataset, const GstDesign& design,
                               const MleOptions& opts = {});

std::string model_to_json(const GateSetModel& m);
GateSetModel model_from_json(const std::string& text);
void save_model(const GateSetModel& m, const std::filesystem::path& path);
GateSetModel load_model(const std::filesystem::path& path);

std::string fit_report_to_json(const FitReport& r);
FitReport fit_report_from_json(const std::string& text);

}  // namespace pfrlab
