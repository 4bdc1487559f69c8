#pragma once

#include <span>
#include <string>
#include <vector>

#include "pfrlab/ptm.hpp"

namespace pfrlab {

// Ordered gate list; gates[0] acts first. The empty circuit is the
// identity channel.
struct CliffordCircuit {
  std::vector<Clifford> gates;

  CliffordCircuit() = default;
  explicit CliffordCircuit(std::vector<Clifford> g) : gates(std::move(g)) {}

  std::size_t size() const { return gates.size(); }
  bool empty() const { return gates.empty(); }
};

// Product R_{g_L} ... R_{g_1}; exact integer arithmetic for Cliffords.
Ptm composed_ptm(std::span<const Clifford> gates);
inline Ptm composed_ptm(const CliffordCircuit& c) { return composed_ptm(c.gates); }

// Group composition of the whole circuit.
Clifford composed_clifford(std::span<const Clifford> gates);

// Text format: one gate token per whitespace-separated entry
// (Gi, Gx, Gy or C0..C23). Multiple lines are allowed; tokens may be
// separated by any whitespace.
std::string circuit_to_text(const CliffordCircuit& c);
CliffordCircuit circuit_from_text(std::string_view text);

}  // namespace pfrlab
