#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pfrlab/circuit.hpp"

namespace pfrlab {

// A frame-randomized realization of a source circuit. Same length as the
// source: every sampled Pauli is absorbed into a neighboring gate, and the
// compensating final frame is absorbed into the last gate, so the composed
// ideal transfer matrix equals the source's exactly.
struct RandomizedCircuit {
  std::vector<Clifford> gates;
  std::vector<Pauli> frame_trace;  // sampled P_1 .. P_L
  Pauli final_frame = Pauli::I;    // P_{L+1}, absorbed into gates.back()
  std::uint64_t rng_seed = 0;
};

// Residual frame after pushing paulis[i] through the tail of cliffords:
// the cumulative frame F_n = P_n * F_{n-1}^{C_{n-1}} (base F_1 = P_1),
// conjugated once more through the last gate. Applying the returned label
// after the sequence cancels every inserted Pauli.
// Throws std::invalid_argument on length mismatch.
Pauli frame_correction(std::span<const Clifford> cliffords,
                       std::span<const Pauli> paulis);

// Deterministic core of randomize(): absorb the given frame draws.
RandomizedCircuit apply_frames(const CliffordCircuit& circuit,
                               std::span<const Pauli> paulis,
                               std::uint64_t seed_tag = 0);

// Draw P_i uniformly (SplitMix64 stream over `seed`), absorb, compensate.
// Throws std::invalid_argument("nothing to randomize") on empty circuits.
RandomizedCircuit randomize(const CliffordCircuit& circuit,
                            std::uint64_t seed);

// True iff composed ideal transfer matrices are entry-wise equal.
bool verify_equivalence(const CliffordCircuit& source,
                        const RandomizedCircuit& randomized);

// Diatomic pulse form: Z(th3) . X_pi/2 . Z(th2) . X_pi/2 . Z(th1) with
// th_j in {0, +-pi/2, pi}. X pulses are physical (fixed duration); Z
// updates are virtual frame rotations and are dropped when the angle is 0.
struct PulseOp {
  enum class Kind { X90, ZUpdate };
  Kind kind = Kind::X90;
  int z_quarter_turns = 0;  // in {-1, 1, 2} for ZUpdate, 0 for X90

  double z_angle() const { return z_quarter_turns * (M_PI / 2.0); }
};

struct PulseProgram {
  std::vector<PulseOp> ops;  // execution order: ops[0] acts first
};

// Lookup built once by exhaustive search over the 4^3 angle triples; the
// compiled program's transfer matrix equals ptm_of_clifford(c) exactly.
PulseProgram diatomic_compile(Clifford c);

// Exact transfer matrix of a pulse program (Z updates map back to group
// elements, so the arithmetic stays integer).
Ptm composed_ptm(const PulseProgram& p);

// Line format for audit: "<seed> <frame trace> <final frame> <gates...>",
// e.g. "42 XZIY X C3 C17 C0 C9".
std::string randomized_to_line(const RandomizedCircuit& rc);
RandomizedCircuit randomized_from_line(std::string_view line);

}  // namespace pfrlab
