#include "pfrlab/pfr.hpp"

#include <array>
#include <sstream>

#include "pfrlab/util.hpp"

namespace pfrlab {

Pauli frame_correction(std::span<const Clifford> cliffords,
                       std::span<const Pauli> paulis) {
  if (cliffords.size() != paulis.size())
    throw std::invalid_argument("frame_correction: length mismatch");
  Pauli frame = Pauli::I;
  for (std::size_t i = 0; i < paulis.size(); ++i) {
    if (i > 0) frame = conjugate_pauli(cliffords[i - 1], frame);
    frame = pauli_mul(paulis[i], frame);
  }
  if (!cliffords.empty()) frame = conjugate_pauli(cliffords.back(), frame);
  return frame;
}

RandomizedCircuit apply_frames(const CliffordCircuit& circuit,
                               std::span<const Pauli> paulis,
                               std::uint64_t seed_tag) {
  const std::size_t n = circuit.size();
  if (n == 0) throw std::invalid_argument("nothing to randomize");
  if (paulis.size() != n)
    throw std::invalid_argument("apply_frames: need one Pauli per gate");

  RandomizedCircuit rc;
  rc.rng_seed = seed_tag;
  rc.frame_trace.assign(paulis.begin(), paulis.end());
  rc.final_frame = frame_correction(circuit.gates, paulis);
  rc.gates.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    rc.gates.push_back(compose(circuit.gates[i], clifford_of_pauli(paulis[i])));
  rc.gates.back() =
      compose(clifford_of_pauli(rc.final_frame), rc.gates.back());
  return rc;
}

RandomizedCircuit randomize(const CliffordCircuit& circuit,
                            std::uint64_t seed) {
  if (circuit.empty()) throw std::invalid_argument("nothing to randomize");
  SplitMix64 rng(seed);
  std::vector<Pauli> draws(circuit.size());
  for (auto& p : draws) p = static_cast<Pauli>(rng.next() >> 62);
  return apply_frames(circuit, draws, seed);
}

bool verify_equivalence(const CliffordCircuit& source,
                        const RandomizedCircuit& randomized) {
  const Ptm a = composed_ptm(source.gates);
  const Ptm b = composed_ptm(randomized.gates);
  return (a.array() == b.array()).all();
}

namespace {

struct DiatomicTable {
  std::array<std::array<int, 3>, kCliffordCount> quarter_turns;
};

Clifford z_gate(int quarter_turns) {
  switch (quarter_turns) {
    case 0: return gate_id();
    case 1: return gate_z90();
    case -1: return inverse(gate_z90());
    case 2: return compose(gate_z90(), gate_z90());
    default: throw std::logic_error("bad Z quarter-turn count");
  }
}

const DiatomicTable& diatomic_table() {
  static const DiatomicTable table = [] {
    DiatomicTable t{};
    std::array<bool, kCliffordCount> found{};
    const int choices[4] = {0, 1, -1, 2};
    for (int a : choices)
      for (int b : choices)
        for (int c : choices) {
          // Execution order Z(a), X90, Z(b), X90, Z(c).
          Clifford g = z_gate(a);
          g = compose(gate_x90(), g);
          g = compose(z_gate(b), g);
          g = compose(gate_x90(), g);
          g = compose(z_gate(c), g);
          if (!found[g.idx]) {
            found[g.idx] = true;
            t.quarter_turns[g.idx] = {a, b, c};
          }
        }
    for (bool f : found)
      if (!f) throw std::logic_error("diatomic search missed a Clifford");
    return t;
  }();
  return table;
}

}  // namespace

PulseProgram diatomic_compile(Clifford c) {
  const auto& turns = diatomic_table().quarter_turns[c.idx];
  PulseProgram p;
  auto push_z = [&](int q) {
    if (q != 0)
      p.ops.push_back({PulseOp::Kind::ZUpdate, q});
  };
  push_z(turns[0]);
  p.ops.push_back({PulseOp::Kind::X90, 0});
  push_z(turns[1]);
  p.ops.push_back({PulseOp::Kind::X90, 0});
  push_z(turns[2]);
  return p;
}

Ptm composed_ptm(const PulseProgram& p) {
  Ptm r = ptm_identity();
  for (const PulseOp& op : p.ops) {
    const Clifford g =
        op.kind == PulseOp::Kind::X90 ? gate_x90() : z_gate(op.z_quarter_turns);
    r = ptm_of_clifford(g) * r;
  }
  return r;
}

std::string randomized_to_line(const RandomizedCircuit& rc) {
  std::string out = std::to_string(rc.rng_seed);
  out += ' ';
  for (Pauli p : rc.frame_trace) out += pauli_char(p);
  out += ' ';
  out += pauli_char(rc.final_frame);
  for (Clifford g : rc.gates) {
    out += ' ';
    out += gate_label(g);
  }
  return out;
}

RandomizedCircuit randomized_from_line(std::string_view line) {
  std::istringstream in{std::string(line)};
  RandomizedCircuit rc;
  std::string frames, final_frame, token;
  if (!(in >> rc.rng_seed >> frames >> final_frame) || final_frame.size() != 1)
    throw std::invalid_argument("bad randomized-circuit line");
  for (char ch : frames) rc.frame_trace.push_back(pauli_from_char(ch));
  rc.final_frame = pauli_from_char(final_frame[0]);
  while (in >> token) rc.gates.push_back(clifford_from_label(token));
  if (rc.gates.size() != rc.frame_trace.size())
    throw std::invalid_argument("bad randomized-circuit line");
  return rc;
}

}  // namespace pfrlab
