#include <doctest.h>

#include "pfrlab/ptm.hpp"
#include "test_helpers.hpp"

using namespace pfrlab;

TEST_SUITE_BEGIN("ptm");

TEST_CASE("clifford transfer matrices are monomial with +-1 entries") {
  for (int c = 0; c < kCliffordCount; ++c) {
    const Ptm r = ptm_of_clifford(Clifford(c));
    for (int i = 0; i < 4; ++i) {
      int nz_row = 0, nz_col = 0;
      for (int j = 0; j < 4; ++j) {
        CHECK((r(i, j) == 0.0 || r(i, j) == 1.0 || r(i, j) == -1.0));
        if (r(i, j) != 0.0) ++nz_row;
        if (r(j, i) != 0.0) ++nz_col;
      }
      CHECK(nz_row == 1);
      CHECK(nz_col == 1);
    }
  }
}

TEST_CASE("transfer matrix examples") {
  CHECK((ptm_of_clifford(gate_id()) - Ptm::Identity()).norm() == 0.0);

  Ptm z180;
  z180 << 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 1;
  CHECK((ptm_of_clifford(clifford_of_pauli(Pauli::Z)) - z180).norm() == 0.0);

  Ptm x90;
  x90 << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  CHECK((ptm_of_clifford(gate_x90()) - x90).norm() == 0.0);

  // Independent oracle: (1/2) Tr[P_i U P_j U+] by direct 2x2 arithmetic.
  const Eigen::Matrix2cd u = testref::rotation(M_PI / 2, {1, 0, 0});
  CHECK((ptm_of_clifford(gate_x90()) - testref::ptm_of_unitary(u)).norm() <
        1e-14);
}

TEST_CASE("composition is a homomorphism on all 576 pairs") {
  for (int a = 0; a < kCliffordCount; ++a)
    for (int b = 0; b < kCliffordCount; ++b) {
      const Ptm lhs = ptm_of_clifford(compose(Clifford(a), Clifford(b)));
      const Ptm rhs = ptm_of_clifford(Clifford(a)) * ptm_of_clifford(Clifford(b));
      REQUIRE((lhs - rhs).norm() == 0.0);
    }
}

TEST_CASE("unitary representatives match their transfer matrices") {
  for (int c = 0; c < kCliffordCount; ++c) {
    const Clifford cc(c);
    CHECK((ptm_of_clifford(cc) -
           testref::ptm_of_unitary(unitary_of_clifford(cc)))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK(clifford_from_ptm(ptm_of_clifford(cc)) == cc);
  }
  CHECK_THROWS_AS(clifford_from_ptm(Ptm::Identity() * 0.5),
                  std::invalid_argument);
}

TEST_CASE("twirl of a Z rotation keeps the diagonal") {
  const double th = 0.1;
  Ptm r = Ptm::Identity();
  r(1, 1) = std::cos(th);
  r(1, 2) = -std::sin(th);
  r(2, 1) = std::sin(th);
  r(2, 2) = std::cos(th);

  // Oracle: average the four conjugated matrices with explicit diagonal
  // sign patterns.
  const double signs[4][4] = {
      {1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
  Ptm avg = Ptm::Zero();
  for (const auto& s : signs) {
    Ptm t;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) t(i, j) = s[i] * r(i, j) * s[j];
    avg += t;
  }
  avg *= 0.25;

  const Ptm tw = pauli_twirl(r);
  CHECK((tw - avg).cwiseAbs().maxCoeff() < 1e-15);
  Ptm expect = Ptm::Identity();
  expect(1, 1) = expect(2, 2) = std::cos(th);
  CHECK((tw - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("twirl is exactly diagonal and idempotent on fixed points") {
  CHECK((pauli_twirl(Ptm::Identity()) - Ptm::Identity()).norm() == 0.0);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Ptm e = testref::random_cptp(rng);
    const Ptm tw = pauli_twirl(e);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (i == j) {
          REQUIRE(tw(i, i) == doctest::Approx(e(i, i)).epsilon(1e-14));
        } else {
          REQUIRE(tw(i, j) == 0.0);  // exact cancellation
        }
      }
    const Ptm diag = e.diagonal().asDiagonal();
    CHECK((pauli_twirl(diag) - diag).norm() == 0.0);
  }
}

TEST_CASE("walsh map matches brute-force character sum") {
  // chi(P, Q) from 2x2 arithmetic: PQ = +-QP.
  double chi[4][4];
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      const Eigen::Matrix2cd pq = testref::pauli2(p) * testref::pauli2(q);
      const Eigen::Matrix2cd qp = testref::pauli2(q) * testref::pauli2(p);
      chi[p][q] = (pq - qp).norm() < 1e-12 ? 1.0 : -1.0;
    }

  const double p_depol = 0.1;
  const Eigen::Vector4d lambda(1.0, 1 - p_depol, 1 - p_depol, 1 - p_depol);
  Eigen::Vector4d brute;
  for (int q = 0; q < 4; ++q) {
    brute[q] = 0.0;
    for (int p = 0; p < 4; ++p) brute[q] += 0.25 * chi[p][q] * lambda[p];
  }
  const Eigen::Vector4d probs = pauli_probs_from_eigenvalues(lambda);
  CHECK((probs - brute).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(probs[0] == doctest::Approx(0.925).epsilon(1e-12));
  CHECK(probs[1] == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(probs[2] == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(probs[3] == doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("walsh trivial examples and round trip") {
  const Eigen::Vector4d identity_probs =
      pauli_probs_from_eigenvalues({1, 1, 1, 1});
  CHECK((identity_probs - Eigen::Vector4d(1, 0, 0, 0)).cwiseAbs().maxCoeff() ==
        0.0);

  const Eigen::Vector4d xflip =
      eigenvalues_from_pauli_probs({0, 1, 0, 0});
  CHECK((xflip - Eigen::Vector4d(1, 1, -1, -1)).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector4d p = testref::random_simplex_point(rng);
    const Eigen::Vector4d round =
        pauli_probs_from_eigenvalues(eigenvalues_from_pauli_probs(p));
    REQUIRE((round - p).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("choi matrices of cliffords have eigenvalues {2, 0, 0, 0}") {
  for (int c = 0; c < kCliffordCount; ++c) {
    const Ptm r = ptm_of_clifford(Clifford(c));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(choi_of_ptm(r));
    const Eigen::Vector4d ev = es.eigenvalues();
    CHECK(std::abs(ev[3] - 2.0) < 1e-12);
    CHECK(std::abs(ev[0]) < 1e-12);
    CHECK(std::abs(ev[1]) < 1e-12);
    CHECK(std::abs(ev[2]) < 1e-12);
    CHECK(is_completely_positive(r));
    CHECK(is_trace_preserving(r));
  }
}

TEST_CASE("choi round trip and CP detection") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Ptm e = testref::random_cptp(rng);
    CHECK((ptm_of_choi(choi_of_ptm(e)) - e).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(is_completely_positive(e, 1e-9));
  }
  // A transpose-like map is positive but not completely positive.
  Ptm transpose_map = Ptm::Identity();
  transpose_map(2, 2) = -1.0;
  CHECK(!is_completely_positive(transpose_map));
}

TEST_CASE("cptp projection repairs a slightly non-CP map") {
  Ptm bad = Ptm::Identity();
  bad(1, 1) = 1.02;  // eigenvalue slightly too large
  const Ptm fixed = project_to_cptp(bad);
  CHECK(is_trace_preserving(fixed, 1e-12));
  CHECK(is_completely_positive(fixed, 1e-9));
  CHECK((fixed - bad).cwiseAbs().maxCoeff() < 0.05);

  const Ptm good = ptm_of_clifford(gate_x90());
  CHECK((project_to_cptp(good) - good).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("ideal spam vectors") {
  // <1| id |0> = 0, and after X_pi the overlap is 1.
  CHECK(effect_one().dot(state_zero()) == doctest::Approx(0.0).epsilon(1e-15));
  const Ptm x180 = ptm_of_clifford(clifford_of_pauli(Pauli::X));
  CHECK(effect_one().dot(x180 * state_zero()) == doctest::Approx(1.0));
}

TEST_SUITE_END();
