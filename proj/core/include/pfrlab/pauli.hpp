#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pfrlab {

// Phase-free single-qubit Pauli label. As channels (and as frame
// corrections) P and -P are indistinguishable, so the global sign is
// discarded throughout.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

// Phase-free product of two Pauli labels.
Pauli pauli_mul(Pauli a, Pauli b);

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

inline constexpr int kCliffordCount = 24;

// One of the 24 phase-free single-qubit Clifford group elements.
// Index 0 is the identity; the rest follow the canonical table order
// (lexicographic in the integer transfer-matrix entries). All tables are
// generated at startup by closing {X_pi/2, Z_pi/2} under multiplication,
// never hand-entered.
struct Clifford {
  std::uint8_t idx = 0;

  Clifford() = default;
  explicit Clifford(int i) {
    if (i < 0 || i >= kCliffordCount)
      throw std::out_of_range("Clifford index must lie in [0, 24)");
    idx = static_cast<std::uint8_t>(i);
  }

  auto operator<=>(const Clifford&) const = default;
};

// compose(a, b): the group element whose transfer matrix is R_a * R_b,
// i.e. "apply b first, then a".
Clifford compose(Clifford a, Clifford b);
Clifford inverse(Clifford c);

// Phase-free label of C P C^dagger.
Pauli conjugate_pauli(Clifford c, Pauli p);

// The Pauli group embedded in the Clifford group (I, X, Y, Z as gates).
Clifford clifford_of_pauli(Pauli p);

// Common gates resolved against the canonical table.
Clifford gate_id();
Clifford gate_x90();  // X_pi/2
Clifford gate_y90();  // Y_pi/2
Clifford gate_z90();  // Z_pi/2
Clifford gate_hadamard();

// "Gi", "Gx", "Gy" for the gate-set elements, otherwise "C<idx>".
std::string gate_label(Clifford c);
// Accepts the labels produced by gate_label.
Clifford clifford_from_label(std::string_view token);

}  // namespace pfrlab
