#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "pfrlab/pauli.hpp"

namespace pfrlab::detail {

using IntPtm = std::array<std::array<std::int8_t, 4>, 4>;

struct CliffordTables {
  std::array<IntPtm, kCliffordCount> ptm;
  std::array<Eigen::Matrix2cd, kCliffordCount> unitary;
  std::array<std::array<std::uint8_t, kCliffordCount>, kCliffordCount> compose;
  std::array<std::uint8_t, kCliffordCount> inverse;
  std::array<std::array<std::uint8_t, 4>, kCliffordCount> conj;  // [c][pauli]
  std::array<std::uint8_t, 4> pauli_gate;                        // Pauli -> Clifford idx
  std::uint8_t id_idx, x90_idx, y90_idx, z90_idx, hadamard_idx;
};

const CliffordTables& clifford_tables();

}  // namespace pfrlab::detail
