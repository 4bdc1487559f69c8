#include <doctest.h>

#include <array>
#include <set>

#include "pfrlab/pfr.hpp"
#include "test_helpers.hpp"

using namespace pfrlab;

namespace {

// Brute-force frame oracle: multiply the 2x2 unitaries of the inserted
// Paulis and gates, divide off the source product, and identify which
// Pauli the residual is proportional to.
Pauli frame_oracle(const std::vector<Clifford>& gates,
                   const std::vector<Pauli>& paulis) {
  Eigen::Matrix2cd with_frames = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd source = Eigen::Matrix2cd::Identity();
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Eigen::Matrix2cd u = unitary_of_clifford(gates[i]);
    with_frames =
        u * testref::pauli2(static_cast<int>(paulis[i])) * with_frames;
    source = u * source;
  }
  const Eigen::Matrix2cd residual = source * with_frames.adjoint();
  for (int p = 0; p < 4; ++p) {
    const double overlap =
        std::abs((testref::pauli2(p).adjoint() * residual).trace());
    if (std::abs(overlap - 2.0) < 1e-9) return static_cast<Pauli>(p);
  }
  FAIL("residual is not a Pauli");
  return Pauli::I;
}

CliffordCircuit random_circuit(std::mt19937_64& rng, int length) {
  std::uniform_int_distribution<int> pick(0, kCliffordCount - 1);
  CliffordCircuit c;
  for (int k = 0; k < length; ++k) c.gates.push_back(Clifford(pick(rng)));
  return c;
}

}  // namespace

TEST_SUITE_BEGIN("pfr");

TEST_CASE("frame correction basics") {
  const std::vector<Clifford> cs = {gate_x90(), gate_z90(), gate_hadamard()};
  CHECK(frame_correction(cs, std::vector<Pauli>{Pauli::I, Pauli::I,
                                                Pauli::I}) == Pauli::I);
  CHECK(frame_correction(std::vector<Clifford>{gate_id()},
                         std::vector<Pauli>{Pauli::Y}) == Pauli::Y);
  CHECK_THROWS_AS(
      frame_correction(cs, std::vector<Pauli>{Pauli::X, Pauli::Z}),
      std::invalid_argument);
}

TEST_CASE("frame correction matches the unitary-propagation oracle") {
  const std::vector<Clifford> cs = {gate_x90(), gate_z90(), gate_hadamard()};
  const std::vector<Pauli> ps = {Pauli::X, Pauli::Z, Pauli::Y};
  CHECK(frame_correction(cs, ps) == frame_oracle(cs, ps));

  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> pick_c(0, kCliffordCount - 1);
  std::uniform_int_distribution<int> pick_p(0, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const int len = 1 + static_cast<int>(rng() % 6);
    std::vector<Clifford> gates;
    std::vector<Pauli> paulis;
    for (int k = 0; k < len; ++k) {
      gates.push_back(Clifford(pick_c(rng)));
      paulis.push_back(static_cast<Pauli>(pick_p(rng)));
    }
    REQUIRE(frame_correction(gates, paulis) == frame_oracle(gates, paulis));
  }
}

TEST_CASE("forced single-gate randomization cancels itself") {
  CliffordCircuit circuit;
  circuit.gates = {gate_id()};
  const RandomizedCircuit rc =
      apply_frames(circuit, std::vector<Pauli>{Pauli::X});
  CHECK(rc.final_frame == Pauli::X);
  CHECK(rc.gates.size() == 1);
  CHECK((composed_ptm(rc.gates) - Ptm::Identity()).norm() == 0.0);
  CHECK(verify_equivalence(circuit, rc));
}

TEST_CASE("all draws of a two-gate circuit compose to X_pi") {
  CliffordCircuit circuit;
  circuit.gates = {gate_x90(), gate_x90()};
  const Ptm x180 = ptm_of_clifford(clifford_of_pauli(Pauli::X));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const RandomizedCircuit rc = apply_frames(
          circuit,
          std::array<Pauli, 2>{static_cast<Pauli>(a), static_cast<Pauli>(b)});
      REQUIRE((composed_ptm(rc.gates) - x180).norm() == 0.0);
    }
}

TEST_CASE("randomization is ideal-equivalent for random circuits and seeds") {
  std::mt19937_64 rng(31);
  CliffordCircuit circuit = random_circuit(rng, 5);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const RandomizedCircuit rc = randomize(circuit, seed);
    REQUIRE(verify_equivalence(circuit, rc));
    REQUIRE(rc.gates.size() == circuit.size());
  }
}

TEST_CASE("corrupting the final frame breaks equivalence") {
  std::mt19937_64 rng(37);
  const CliffordCircuit circuit = random_circuit(rng, 4);
  RandomizedCircuit rc = randomize(circuit, 99);
  CHECK(verify_equivalence(circuit, rc));
  // Re-absorb a wrong final frame on top of the correct one.
  rc.gates.back() = compose(clifford_of_pauli(Pauli::X), rc.gates.back());
  CHECK(!verify_equivalence(circuit, rc));
}

TEST_CASE("randomize rejects the empty circuit") {
  CHECK_THROWS_WITH(randomize(CliffordCircuit{}, 1), "nothing to randomize");
}

TEST_CASE("same seed gives identical randomizations") {
  std::mt19937_64 rng(41);
  const CliffordCircuit circuit = random_circuit(rng, 8);
  const RandomizedCircuit a = randomize(circuit, 1234);
  const RandomizedCircuit b = randomize(circuit, 1234);
  CHECK(a.gates == b.gates);
  CHECK(a.frame_trace == b.frame_trace);
  CHECK(a.final_frame == b.final_frame);
  const RandomizedCircuit c = randomize(circuit, 1235);
  CHECK(a.frame_trace != c.frame_trace);
}

TEST_CASE("frame draws are uniform at every position") {
  std::mt19937_64 rng(43);
  const CliffordCircuit circuit = random_circuit(rng, 4);
  const int n = 100000;
  int counts[4][4] = {};
  for (int shot = 0; shot < n; ++shot) {
    const RandomizedCircuit rc = randomize(circuit, 1000000 + shot);
    for (int pos = 0; pos < 4; ++pos)
      ++counts[pos][static_cast<int>(rc.frame_trace[pos])];
  }
  for (int pos = 0; pos < 4; ++pos)
    for (int p = 0; p < 4; ++p) {
      const double freq = static_cast<double>(counts[pos][p]) / n;
      REQUIRE(freq == doctest::Approx(0.25).epsilon(0.04));  // 0.25 +- 0.01
    }
}

TEST_CASE("averaging the four frame draws realizes the twirl") {
  // Error transfer matrix with dyadic entries: every product and four-term
  // sum below is exact in double precision, so equality is bitwise.
  Ptm e;
  e << 1, 0, 0, 0,
      0, 0.75, 0.125, 0,
      0, -0.125, 0.75, 0.25,
      0.125, 0, 0.25, 0.5;

  for (int c = 0; c < kCliffordCount; ++c) {
    const Ptm rc = ptm_of_clifford(Clifford(c));
    Ptm avg = Ptm::Zero();
    for (int p = 0; p < 4; ++p) {
      const Pauli p1 = static_cast<Pauli>(p);
      const Pauli p2 = conjugate_pauli(Clifford(c), p1);
      // Final correction as its own pulse, carrying its own error.
      const Ptm draw = (e * ptm_of_pauli(p2)) * (e * rc * ptm_of_pauli(p1));
      avg += draw;
    }
    avg *= 0.25;
    const Ptm expected = e * (pauli_twirl(e) * rc);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) REQUIRE(avg(i, j) == expected(i, j));
  }

  // The same identity for generic error maps, to numerical precision.
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const Ptm err = testref::random_cptp(rng);
    const Clifford cl(static_cast<int>(rng() % kCliffordCount));
    const Ptm rc = ptm_of_clifford(cl);
    Ptm avg = Ptm::Zero();
    for (int p = 0; p < 4; ++p) {
      const Pauli p1 = static_cast<Pauli>(p);
      const Pauli p2 = conjugate_pauli(cl, p1);
      avg += (err * ptm_of_pauli(p2)) * (err * rc * ptm_of_pauli(p1));
    }
    avg *= 0.25;
    REQUIRE((avg - err * pauli_twirl(err) * rc).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("diatomic form compiles every clifford exactly") {
  for (int c = 0; c < kCliffordCount; ++c) {
    const PulseProgram p = diatomic_compile(Clifford(c));
    int n_x90 = 0, n_z = 0;
    for (const PulseOp& op : p.ops) {
      if (op.kind == PulseOp::Kind::X90) {
        ++n_x90;
        CHECK(op.z_quarter_turns == 0);
      } else {
        ++n_z;
        CHECK((op.z_quarter_turns == 1 || op.z_quarter_turns == -1 ||
               op.z_quarter_turns == 2));
      }
    }
    CHECK(n_x90 == 2);
    CHECK(n_z <= 3);
    REQUIRE((composed_ptm(p) - ptm_of_clifford(Clifford(c))).norm() == 0.0);
  }
}

TEST_CASE("diatomic form of X90 has a passthrough middle frame") {
  const PulseProgram p = diatomic_compile(gate_x90());
  CHECK((composed_ptm(p) - ptm_of_clifford(gate_x90())).norm() == 0.0);
}

TEST_CASE("circuit text and randomized line formats round trip") {
  std::mt19937_64 rng(53);
  const CliffordCircuit circuit = random_circuit(rng, 6);
  const CliffordCircuit back = circuit_from_text(circuit_to_text(circuit));
  CHECK(back.gates == circuit.gates);

  const RandomizedCircuit rc = randomize(circuit, 777);
  const RandomizedCircuit rc2 = randomized_from_line(randomized_to_line(rc));
  CHECK(rc2.gates == rc.gates);
  CHECK(rc2.frame_trace == rc.frame_trace);
  CHECK(rc2.final_frame == rc.final_frame);
  CHECK(rc2.rng_seed == rc.rng_seed);

  CHECK_THROWS_AS(randomized_from_line("not a line"), std::invalid_argument);
  CHECK_THROWS_AS(circuit_from_text("Gx BadToken"), std::invalid_argument);
}

TEST_SUITE_END();
