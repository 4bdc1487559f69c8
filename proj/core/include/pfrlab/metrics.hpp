#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>

#include "pfrlab/estimation.hpp"

namespace pfrlab {

// Average gate infidelity 1 - F with F = (Tr(T^-1 R) + d) / (d^2 + d),
// d = 2. Throws std::invalid_argument for a singular target.
double avg_gate_infidelity(const Ptm& r, const Ptm& target);

struct DiamondOptions {
  int starts = 32;        // multi-start count (first start: maximally
                          // entangled input, the analytic optimum for
                          // Pauli channels)
  double tol = 1e-8;      // convergence tolerance on the objective
  int max_iters = 300;    // ascent iterations per start
  std::uint64_t seed = 0x4d1a0ull;
};

// Full diamond norm of the difference ||R - T||_diamond (no 1/2 factor;
// depolarizing p against the identity gives 3p/2). Computed by monotone
// alternating maximization of ||(Delta x id_2)(psi psi+)||_1 over pure
// states of the qubit-plus-qubit-reference system; a reference of
// dimension 2 is sufficient for qubit maps.
double diamond_distance(const Ptm& r, const Ptm& target,
                        const DiamondOptions& opts = {});

// Trace norm of (Delta x id)(psi psi+) for one pure state; the quantity
// diamond_distance maximizes (exposed for certification tests).
double diamond_objective(const Ptm& delta, const Eigen::Vector4cd& psi);

using NamedValues = std::map<std::string, double>;
using Estimator = std::function<NamedValues(const Dataset&)>;

struct BootstrapOptions {
  int n_resamples = 100;  // parametric bootstrap size (>= 100)
  std::uint64_t seed = 0xb007ull;
};

// Parametric bootstrap: resample counts row-wise from the fitted model's
// probabilities, re-run the estimator, return the [2.5%, 97.5%]
// percentile interval per named quantity. Resamples are independent and
// evaluated in deterministic order (parallel-safe per-resample seeds).
std::map<std::string, std::array<double, 2>> bootstrap_ci(
    const Estimator& estimator, const Dataset& base,
    const std::vector<double>& model_probs, const BootstrapOptions& opts = {});

struct GateMetrics {
  std::string label;
  double infidelity = 0.0;
  double diamond = 0.0;
  // 95% bootstrap intervals; NaN bounds when no bootstrap was run.
  std::array<double, 2> infidelity_ci{std::nan(""), std::nan("")};
  std::array<double, 2> diamond_ci{std::nan(""), std::nan("")};
};

struct MetricsReport {
  std::vector<GateMetrics> gates;
  // Conventions are spelled out in every artifact; they differ across the
  // literature by factors of 1/2.
  std::string diamond_convention =
      "full diamond norm of the difference (depolarizing p vs identity "
      "gives 3p/2)";
  std::string gauge_note = "computed on gauge-optimized estimates";
};

// Per-gate metrics of a (gauge-optimized) model against its targets.
MetricsReport compute_metrics(const GateSetModel& model,
                              const GateSetModel& target,
                              const DiamondOptions& opts = {});

std::string metrics_to_json(const MetricsReport& r);

}  // namespace pfrlab
