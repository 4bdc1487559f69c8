#include "pfrlab/circuit.hpp"

#include <sstream>

namespace pfrlab {

Ptm composed_ptm(std::span<const Clifford> gates) {
  Ptm r = ptm_identity();
  for (const Clifford g : gates) r = ptm_of_clifford(g) * r;
  return r;
}

Clifford composed_clifford(std::span<const Clifford> gates) {
  Clifford c = gate_id();
  for (const Clifford g : gates) c = compose(g, c);
  return c;
}

std::string circuit_to_text(const CliffordCircuit& c) {
  std::string out;
  for (std::size_t k = 0; k < c.gates.size(); ++k) {
    if (k) out += ' ';
    out += gate_label(c.gates[k]);
  }
  return out;
}

CliffordCircuit circuit_from_text(std::string_view text) {
  CliffordCircuit c;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) c.gates.push_back(clifford_from_label(token));
  return c;
}

}  // namespace pfrlab
