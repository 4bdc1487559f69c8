#include "pfrlab/ptm.hpp"

#include <cmath>

#include "clifford_tables.hpp"

namespace pfrlab {

namespace {

// chi(P, Q): +1 when P and Q commute, -1 otherwise.
constexpr double kWalsh[4][4] = {
    {1, 1, 1, 1},
    {1, 1, -1, -1},
    {1, -1, 1, -1},
    {1, -1, -1, 1},
};

Eigen::Matrix2cd pauli_matrix(int p) {
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix2cd m;
  switch (p) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

// Basis element P_j^T (x) P_i of the Choi expansion.
Eigen::Matrix4cd choi_basis(int i, int j) {
  return kron2(pauli_matrix(j).transpose(), pauli_matrix(i));
}

}  // namespace

Ptm ptm_identity() { return Ptm::Identity(); }

Ptm ptm_of_clifford(Clifford c) {
  const auto& t = detail::clifford_tables().ptm[c.idx];
  Ptm r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = static_cast<double>(t[i][j]);
  return r;
}

Ptm ptm_of_pauli(Pauli p) { return ptm_of_clifford(clifford_of_pauli(p)); }

Eigen::Matrix2cd unitary_of_clifford(Clifford c) {
  return detail::clifford_tables().unitary[c.idx];
}

Clifford clifford_from_ptm(const Ptm& m) {
  detail::IntPtm q{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const long long v = std::llround(m(i, j));
      if (std::abs(m(i, j) - static_cast<double>(v)) > 1e-9 || v < -1 || v > 1)
        throw std::invalid_argument("matrix is not a Clifford transfer matrix");
      q[i][j] = static_cast<std::int8_t>(v);
    }
  const auto& tables = detail::clifford_tables();
  for (int k = 0; k < kCliffordCount; ++k)
    if (tables.ptm[k] == q) return Clifford(k);
  throw std::invalid_argument("matrix is not a Clifford transfer matrix");
}

Ptm pauli_twirl(const Ptm& e) {
  Ptm sum = Ptm::Zero();
  for (int p = 0; p < 4; ++p) {
    const Ptm rp = ptm_of_pauli(static_cast<Pauli>(p));
    sum += rp * e * rp;
  }
  return 0.25 * sum;
}

Eigen::Vector4d pauli_probs_from_eigenvalues(const Eigen::Vector4d& lambda) {
  Eigen::Vector4d p;
  for (int q = 0; q < 4; ++q) {
    double s = 0;
    for (int k = 0; k < 4; ++k) s += kWalsh[k][q] * lambda[k];
    p[q] = 0.25 * s;
  }
  return p;
}

Eigen::Vector4d eigenvalues_from_pauli_probs(const Eigen::Vector4d& probs) {
  Eigen::Vector4d lambda;
  for (int k = 0; k < 4; ++k) {
    double s = 0;
    for (int q = 0; q < 4; ++q) s += kWalsh[k][q] * probs[q];
    lambda[k] = s;
  }
  return lambda;
}

Ptm ptm_of_pauli_channel(const Eigen::Vector4d& probs) {
  return eigenvalues_from_pauli_probs(probs).asDiagonal();
}

Eigen::Matrix4cd choi_of_ptm(const Ptm& r) {
  Eigen::Matrix4cd choi = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (r(i, j) == 0.0) continue;
      choi += (0.5 * r(i, j)) * choi_basis(i, j);
    }
  return choi;
}

Ptm ptm_of_choi(const Eigen::Matrix4cd& choi) {
  Ptm r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      // <B, choi> / 2 with <A, B> = Tr[A+ B]; the basis elements have
      // squared norm 4 and the forward map carries a factor 1/2.
      r(i, j) = 0.5 * (choi_basis(i, j).adjoint() * choi).trace().real();
    }
  return r;
}

bool is_trace_preserving(const Ptm& r, double tol) {
  return std::abs(r(0, 0) - 1.0) <= tol && std::abs(r(0, 1)) <= tol &&
         std::abs(r(0, 2)) <= tol && std::abs(r(0, 3)) <= tol;
}

double min_choi_eigenvalue(const Ptm& r) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(choi_of_ptm(r));
  return es.eigenvalues().minCoeff();
}

bool is_completely_positive(const Ptm& r, double tol) {
  return min_choi_eigenvalue(r) >= -tol;
}

Ptm project_to_cptp(const Ptm& r, int max_iters, double tol) {
  // Dykstra between the TP affine set (projection: overwrite the first
  // row) and the PSD cone in Choi coordinates; the PTM <-> Choi map is an
  // isometry, so the combined iteration converges to the nearest CPTP map.
  Ptm x = r;
  Ptm correction = Ptm::Zero();
  for (int it = 0; it < max_iters; ++it) {
    Ptm y = x;
    y.row(0) << 1, 0, 0, 0;

    const Ptm z = y + correction;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(choi_of_ptm(z));
    Eigen::Vector4d ev = es.eigenvalues();
    for (int k = 0; k < 4; ++k) ev[k] = std::max(ev[k], 0.0);
    const Eigen::Matrix4cd psd = es.eigenvectors() * ev.asDiagonal() *
                                 es.eigenvectors().adjoint();
    const Ptm x_next = ptm_of_choi(psd);
    correction = z - x_next;
    if ((x_next - x).cwiseAbs().maxCoeff() < tol && it > 0) {
      x = x_next;
      break;
    }
    x = x_next;
  }
  x.row(0) << 1, 0, 0, 0;
  return x;
}

Bloch4 state_zero() {
  const double s = 1.0 / std::sqrt(2.0);
  return Bloch4(s, 0, 0, s);
}

Bloch4 effect_one() {
  const double s = 1.0 / std::sqrt(2.0);
  return Bloch4(s, 0, 0, -s);
}

}  // namespace pfrlab
