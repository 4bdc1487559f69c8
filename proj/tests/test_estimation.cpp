#include <doctest.h>

#include <random>

#include "est_helpers.hpp"
#include "pfrlab/estimation.hpp"
#include "pfrlab/metrics.hpp"

using namespace pfrlab;

TEST_SUITE_BEGIN("estimation");

TEST_CASE("fit_h0 closed forms") {
  Dataset ds;
  ds.rows = {{0, 10, 10}};
  const auto saturated = fit_h0(ds);
  CHECK(saturated.first == 0.0);
  CHECK(saturated.second == 1);

  ds.rows = {{0, 2, 1}};
  const auto half = fit_h0(ds);
  CHECK(half.first == doctest::Approx(2.0 * std::log(0.5)).epsilon(1e-12));
  CHECK(half.second == 1);

  ds.rows = {{0, 4, 2}, {1, 4, 4}};
  const auto two_rows = fit_h0(ds);
  CHECK(two_rows.first == doctest::Approx(4.0 * std::log(0.5)).epsilon(1e-12));
  CHECK(two_rows.second == 2);

  ds.rows = {{0, 0, 0}};
  CHECK_THROWS_AS(fit_h0(ds), std::invalid_argument);
}

TEST_CASE("n_sigma arithmetic") {
  CHECK(n_sigma(-50.0, -25.0, 10, 60) == 0.0);  // LLR = 50 = k
  const double k = 50.0;
  const double llr = k + 2.0 * std::sqrt(2.0 * k);
  CHECK(n_sigma(-0.5 * llr, 0.0, 0, 50) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(n_sigma(0, 0, 5, 5), std::invalid_argument);
  CHECK_THROWS_AS(n_sigma(0, 0, 7, 5), std::invalid_argument);
}

TEST_CASE("simplex projection: properties and grid oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Vector4d v(u(rng), u(rng), u(rng), u(rng));
    const Eigen::Vector4d p = project_to_simplex(v);
    REQUIRE(p.minCoeff() >= 0.0);
    REQUIRE(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
    // Nearest point: no feasible direction improves the distance.
    std::mt19937_64 rng2(trial);
    std::uniform_real_distribution<double> w(0.0, 1.0);
    for (int probe = 0; probe < 20; ++probe) {
      Eigen::Vector4d q(w(rng2), w(rng2), w(rng2), w(rng2));
      q /= q.sum();
      REQUIRE((p - v).squaredNorm() <= (q - v).squaredNorm() + 1e-12);
    }
  }
  // Interior points are fixed.
  const Eigen::Vector4d interior(0.4, 0.3, 0.2, 0.1);
  CHECK((project_to_simplex(interior) - interior).cwiseAbs().maxCoeff() <
        1e-15);
}

TEST_CASE("project_h2: idempotence and entry handling") {
  const GstDesign design = standard_design(1);
  GateSetModel model = testref::default_planted_model(design);
  const GateSetModel projected = project_h2(model, design);
  CHECK(testref::max_gate_distance(model, projected) < 1e-12);  // already H2

  // Off-diagonals on Gi are zeroed, feasible diagonal kept.
  GateSetModel noisy = ideal_target_model(design);
  Ptm gi = Ptm::Identity();
  gi(1, 1) = 0.98;
  gi(2, 2) = 0.97;
  gi(3, 3) = 0.99;
  gi(1, 2) = 0.01;
  gi(2, 3) = 0.01;
  gi(3, 1) = -0.01;
  noisy.gates[0] = gi;
  const GateSetModel fixed = project_h2(noisy, design);
  CHECK(fixed.gates[0](1, 2) == 0.0);
  CHECK(fixed.gates[0](2, 3) == 0.0);
  CHECK(fixed.gates[0](3, 1) == 0.0);
  CHECK(fixed.gates[0](1, 1) == doctest::Approx(0.98).epsilon(1e-12));
  CHECK(fixed.gates[0](2, 2) == doctest::Approx(0.97).epsilon(1e-12));
  CHECK(fixed.gates[0](3, 3) == doctest::Approx(0.99).epsilon(1e-12));
  // SPAM untouched.
  CHECK((fixed.rho - noisy.rho).norm() == 0.0);
  CHECK((fixed.effect - noisy.effect).norm() == 0.0);
  // Entries never exceed 1 in magnitude.
  for (const Ptm& r : fixed.gates) CHECK(r.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
}

TEST_CASE("project_h2 matches a brute-force simplex grid") {
  const GstDesign design = standard_design(1);
  GateSetModel infeasible = ideal_target_model(design);
  Ptm gi = Ptm::Identity();
  gi(1, 1) = 1.05;  // eigenvalue outside the channel polytope
  infeasible.gates[0] = gi;
  const GateSetModel fixed = project_h2(infeasible, design);

  const Eigen::Vector4d lambda(1.0, 1.05, 1.0, 1.0);
  const Eigen::Vector4d target = pauli_probs_from_eigenvalues(lambda);

  // Brute-force minimization over the 3-simplex at resolution 1e-3.
  const int steps = 1000;
  double best = 1e300;
  Eigen::Vector4d best_p = Eigen::Vector4d::Zero();
  for (int a = 0; a <= steps; ++a)
    for (int b = 0; b <= steps - a; ++b)
      for (int c = 0; c <= steps - a - b; ++c) {
        const double px = a * 1e-3, py = b * 1e-3, pz = c * 1e-3;
        const double pi = 1.0 - px - py - pz;
        const double d = (px - target[1]) * (px - target[1]) +
                         (py - target[2]) * (py - target[2]) +
                         (pz - target[3]) * (pz - target[3]) +
                         (pi - target[0]) * (pi - target[0]);
        if (d < best) {
          best = d;
          best_p = Eigen::Vector4d(pi, px, py, pz);
        }
      }
  const Eigen::Vector4d grid_lambda = eigenvalues_from_pauli_probs(best_p);
  for (int i = 1; i < 4; ++i)
    CHECK(fixed.gates[0](i, i) ==
          doctest::Approx(grid_lambda[i]).epsilon(0.005));
}

TEST_CASE("lgst recovers the target set from exact probabilities") {
  const GstDesign design = standard_design(1);
  const GateSetModel truth = ideal_target_model(design);
  const Dataset ds = testref::exact_dataset(design, truth);
  const GateSetModel seed = lgst_seed(ds, design);
  const GateSetModel aligned = gauge_optimize(seed, truth);
  CHECK(testref::max_gate_distance(aligned, truth) < 1e-10);
  CHECK((aligned.rho - truth.rho).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((aligned.effect - truth.effect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("lgst on a depolarized gate set") {
  const GstDesign design = standard_design(1);
  GateSetModel truth = ideal_target_model(design);
  const Eigen::Vector4d depol =
      pauli_probs_from_eigenvalues({1.0, 0.95, 0.95, 0.95});
  for (Ptm& r : truth.gates) r = ptm_of_pauli_channel(depol) * r;
  const Dataset ds = testref::exact_dataset(design, truth);
  const GateSetModel aligned = gauge_optimize(lgst_seed(ds, design), truth);
  CHECK(testref::max_gate_distance(aligned, truth) < 1e-6);
  CHECK(aligned.gates[0](1, 1) == doctest::Approx(0.95).epsilon(1e-6));
}

TEST_CASE("lgst from finite samples stays close in diamond distance") {
  const GstDesign design = standard_design(1);
  const GateSetModel truth = testref::default_planted_model(design);
  const Dataset ds = testref::sample_from_model(design, truth, 10000, 55);
  const GateSetModel aligned = gauge_optimize(lgst_seed(ds, design), truth);
  for (std::size_t g = 0; g < truth.gates.size(); ++g) {
    const double dd = diamond_distance(aligned.gates[g], truth.gates[g]);
    REQUIRE(dd <= 0.05);
  }
}

TEST_CASE("lgst rejects incomplete or missing data") {
  const GstDesign design = standard_design(1);
  const GateSetModel truth = ideal_target_model(design);
  Dataset ds = testref::exact_dataset(design, truth);
  ds.rows.resize(10);  // drop most fiducial pairs
  CHECK_THROWS_WITH(lgst_seed(ds, design), "informationally incomplete data");
}

TEST_CASE("gauge optimization: plant and recover") {
  const GstDesign design = standard_design(1);
  const GateSetModel target = testref::default_planted_model(design);

  // Identity case.
  const GateSetModel same = gauge_optimize(target, target);
  CHECK(testref::max_gate_distance(same, target) < 1e-12);

  // Conjugate by a small random TP gauge, then recover.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  Ptm g = Ptm::Identity();
  for (int i = 1; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) += u(rng);
  const Ptm ginv = g.inverse();
  GateSetModel moved = target;
  for (Ptm& r : moved.gates) r = g * r * ginv;
  moved.rho = g * target.rho;
  moved.effect = ginv.transpose() * target.effect;

  const GateSetModel recovered = gauge_optimize(moved, target);
  double objective = 0.0;
  for (std::size_t q = 0; q < recovered.gates.size(); ++q)
    objective += (recovered.gates[q] - target.gates[q]).squaredNorm();
  CHECK(objective < 1e-10);
}

TEST_CASE("gauge transforms leave probabilities invariant") {
  const GstDesign design = standard_design(4);
  const GateSetModel model = testref::default_planted_model(design);
  const GateSetModel moved = gauge_optimize(model, ideal_target_model(design));

  Dataset probe;
  const int n_seq = static_cast<int>(design.sequences.size());
  for (int s = 0; s < 100; ++s) probe.rows.push_back({(s * 3) % n_seq, 1, 0});
  const auto p1 = model_probabilities(probe, design, model);
  const auto p2 = model_probabilities(probe, design, moved);
  for (std::size_t s = 0; s < p1.size(); ++s)
    REQUIRE(p1[s] == doctest::Approx(p2[s]).epsilon(1e-12));

  // Likelihood is gauge invariant too.
  const Dataset ds = testref::sample_from_model(design, model, 500, 5);
  CHECK(dataset_loglik(ds, design, model) ==
        doctest::Approx(dataset_loglik(ds, design, moved)).epsilon(1e-10));
}

TEST_CASE("model_dof: counts and gauge ranks") {
  const GstDesign big = standard_design(1024);
  const GateSetModel at = testref::default_planted_model(big);
  CHECK(model_dof(Hypothesis::H0, big, at) == 3505);

  const GstDesign design = standard_design(4);
  // Generic TP model: full 12-dimensional gauge orbit.
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  GateSetModel generic = ideal_target_model(design);
  for (Ptm& r : generic.gates)
    for (int i = 1; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r(i, j) += u(rng);
  int rank = 0;
  const long dof1 = model_dof(Hypothesis::H1, design, generic, &rank);
  CHECK(rank == 12);
  CHECK(dof1 == 43 - 12);

  // Pauli-stochastic point: three residual gauge directions (diagonal
  // gauges preserve the monomial pattern), so dof = 9 + 7 - 3.
  const GateSetModel h2_point = testref::default_planted_model(design);
  int residual = 0;
  const long dof2 = model_dof(Hypothesis::H2, design, h2_point, &residual);
  CHECK(residual == 3);
  CHECK(dof2 == 13);
}

TEST_CASE("gauge jacobian columns match finite differences") {
  const GstDesign design = standard_design(1);
  const GateSetModel m = testref::default_planted_model(design);
  // Probe one gauge direction: K = E_{2,1}.
  const double eps = 1e-7;
  Ptm k_dir = Ptm::Zero();
  k_dir(2, 1) = 1.0;
  const Ptm g = Ptm::Identity() + eps * k_dir;
  const Ptm ginv = g.inverse();
  GateSetModel moved = m;
  for (Ptm& r : moved.gates) r = g * r * ginv;
  moved.rho = g * m.rho;
  moved.effect = ginv.transpose() * m.effect;

  // Finite difference of one transformed entry vs the analytic direction
  // K R - R K used by model_dof.
  const Ptm analytic = k_dir * m.gates[1] - m.gates[1] * k_dir;
  const Ptm fd = (moved.gates[1] - m.gates[1]) / eps;
  CHECK((fd - analytic).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("mle recovers an exact markovian model (infinite-shot limit)") {
  const GstDesign design = standard_design(4);
  const GateSetModel truth = testref::default_planted_model(design);
  const Dataset ds = testref::exact_dataset(design, truth, 1LL << 40);
  MleOptions opts;
  opts.grad_tol = 1e-10;
  const MleFit fit = fit_h1_mle(ds, design, lgst_seed(ds, design), opts);
  const GateSetModel aligned = gauge_optimize(fit.model, truth);
  CHECK(testref::max_gate_distance(aligned, truth) < 1e-6);
  // The likelihood of the fit cannot fall below the truth's.
  CHECK(fit.logl >= dataset_loglik(ds, design, truth) - 1e-3);
}

TEST_CASE("nesting and calibration on sampled pauli data") {
  const GstDesign design = standard_design(8);
  const GateSetModel truth = testref::default_planted_model(design);
  const Dataset ds = testref::sample_from_model(design, truth, 2000, 99);

  const AnalysisResult res = analyze_dataset(ds, design);
  CHECK(res.report.dof_h0 > res.report.dof_h1);
  CHECK(res.report.dof_h1 > res.report.dof_h2);
  CHECK(res.report.logl_h0 >= res.report.logl_h1 - 1e-6);
  CHECK(res.report.logl_h1 >= res.report.logl_h2 - 1e-6);
  // Data drawn from an exact H2 model: both hypotheses fit well.
  CHECK(std::abs(res.report.n_sigma_h1) <= 3.5);
  CHECK(std::abs(res.report.n_sigma_h2) <= 3.5);
  // H2 projection of the fit is close to the planted truth.
  const GateSetModel aligned = gauge_optimize(res.h2, truth);
  CHECK(testref::max_gate_distance(aligned, truth) < 0.02);
}

TEST_CASE("optimizer determinism: identical logl across runs") {
  const GstDesign design = standard_design(2);
  const GateSetModel truth = testref::default_planted_model(design);
  const Dataset ds = testref::sample_from_model(design, truth, 300, 7);
  const AnalysisResult a = analyze_dataset(ds, design);
  const AnalysisResult b = analyze_dataset(ds, design);
  CHECK(a.report.logl_h1 == b.report.logl_h1);
  CHECK(a.report.logl_h2 == b.report.logl_h2);
  CHECK(testref::max_gate_distance(a.h1, b.h1) == 0.0);
}

TEST_CASE("model and report json round trips") {
  const GstDesign design = standard_design(1);
  const GateSetModel m = testref::default_planted_model(design);
  const GateSetModel back = model_from_json(model_to_json(m));
  CHECK(testref::max_gate_distance(m, back) == 0.0);
  CHECK((m.rho - back.rho).norm() == 0.0);
  CHECK((m.effect - back.effect).norm() == 0.0);
  CHECK(back.labels == m.labels);

  FitReport r;
  r.logl_h0 = -1234.5678901234567;
  r.logl_h1 = -1250.1;
  r.logl_h2 = -1260.2;
  r.dof_h0 = 92;
  r.dof_h1 = 31;
  r.dof_h2 = 13;
  r.n_sigma_h1 = 1.25;
  r.n_sigma_h2 = -0.5;
  r.gauge_rank_h1 = 12;
  r.gauge_rank_h2 = 3;
  const FitReport back_r = fit_report_from_json(fit_report_to_json(r));
  CHECK(back_r.logl_h0 == r.logl_h0);
  CHECK(back_r.dof_h2 == r.dof_h2);
  CHECK(back_r.n_sigma_h2 == r.n_sigma_h2);
  CHECK(back_r.gauge_rank_h1 == r.gauge_rank_h1);
}

TEST_SUITE_END();
