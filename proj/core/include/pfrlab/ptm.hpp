#pragma once

#include <Eigen/Dense>

#include "pfrlab/pauli.hpp"

namespace pfrlab {

// 4x4 real Pauli-Liouville (Pauli transfer) matrix in the orthonormal
// basis B_i = P_i / sqrt(2), ordered (I, X, Y, Z). A map is trace
// preserving iff its first row is (1, 0, 0, 0).
using Ptm = Eigen::Matrix4d;

// State / effect vector in the same basis.
using Bloch4 = Eigen::Vector4d;

Ptm ptm_identity();

// Transfer matrix of a Clifford: monomial with entries in {-1, 0, +1},
// exactly one non-zero per row and column. Entries are exact integers.
Ptm ptm_of_clifford(Clifford c);

// Transfer matrix of a Pauli gate: diagonal with entries +-1.
Ptm ptm_of_pauli(Pauli p);

// Canonical 2x2 unitary representative (global phase fixed by making the
// largest-magnitude entry real positive).
Eigen::Matrix2cd unitary_of_clifford(Clifford c);

// Exact reverse lookup; throws std::invalid_argument if m is not a
// Clifford transfer matrix.
Clifford clifford_from_ptm(const Ptm& m);

// Average of P E P over the four Pauli conjugations. Off-diagonal entries
// cancel exactly (same-magnitude floats of opposite sign), so the result
// is the diagonal of the input, bit for bit.
Ptm pauli_twirl(const Ptm& e);

// Walsh map between Pauli-channel eigenvalues (diagonal transfer-matrix
// entries) and Pauli (quasi-)probabilities: p_Q = (1/4) sum_P chi(P,Q)
// lambda_P with chi = +1 when P and Q commute, -1 otherwise. Inverse is
// lambda = W p with the same character matrix.
Eigen::Vector4d pauli_probs_from_eigenvalues(const Eigen::Vector4d& lambda);
Eigen::Vector4d eigenvalues_from_pauli_probs(const Eigen::Vector4d& probs);

// Diagonal Pauli channel from probabilities (p_I, p_X, p_Y, p_Z).
Ptm ptm_of_pauli_channel(const Eigen::Vector4d& probs);

// Choi matrix, normalized so that a trace-preserving map has trace 2.
// The PTM <-> Choi correspondence is a linear isometry in Frobenius norm.
Eigen::Matrix4cd choi_of_ptm(const Ptm& r);
Ptm ptm_of_choi(const Eigen::Matrix4cd& choi);

bool is_trace_preserving(const Ptm& r, double tol = 1e-12);
// Complete positivity: all Choi eigenvalues >= -tol.
bool is_completely_positive(const Ptm& r, double tol = 1e-10);
double min_choi_eigenvalue(const Ptm& r);

// Nearest CPTP map (Dykstra alternating projections between the PSD cone
// in Choi space and the TP affine set).
Ptm project_to_cptp(const Ptm& r, int max_iters = 400, double tol = 1e-12);

// Ideal SPAM vectors: |0><0| preparation and |1><1| measurement effect.
Bloch4 state_zero();
Bloch4 effect_one();

}  // namespace pfrlab
