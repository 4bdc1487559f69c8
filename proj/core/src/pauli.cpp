#include "pfrlab/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "clifford_tables.hpp"

namespace pfrlab {

namespace {

// Product table modulo phase: row a, column b.
constexpr std::uint8_t kPauliMul[4][4] = {
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
};

constexpr char kPauliChars[4] = {'I', 'X', 'Y', 'Z'};

}  // namespace

Pauli pauli_mul(Pauli a, Pauli b) {
  return static_cast<Pauli>(
      kPauliMul[static_cast<int>(a)][static_cast<int>(b)]);
}

char pauli_char(Pauli p) { return kPauliChars[static_cast<int>(p)]; }

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw std::invalid_argument(std::string("not a Pauli label: ") + c);
  }
}

namespace detail {

namespace {

using Eigen::Matrix2cd;
using std::complex;

Matrix2cd pauli_matrix(int p) {
  const complex<double> i(0.0, 1.0);
  Matrix2cd m;
  switch (p) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Integer transfer matrix of a 2x2 unitary: R_ij = (1/2) Tr[P_i U P_j U+],
// rounded (entries of a Clifford are exactly -1, 0 or +1 up to fp noise).
IntPtm int_ptm_of_unitary(const Matrix2cd& u) {
  IntPtm r{};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const complex<double> tr =
          (pauli_matrix(a) * u * pauli_matrix(b) * u.adjoint()).trace();
      const double v = 0.5 * tr.real();
      const long long q = std::llround(v);
      if (std::abs(v - static_cast<double>(q)) > 1e-9 || q < -1 || q > 1)
        throw std::logic_error("unitary is not Clifford");
      r[a][b] = static_cast<std::int8_t>(q);
    }
  }
  return r;
}

Matrix2cd canonical_phase(Matrix2cd u) {
  int best = 0;
  double mag = -1.0;
  for (int k = 0; k < 4; ++k) {
    const double m = std::abs(u(k / 2, k % 2));
    if (m > mag + 1e-12) {
      mag = m;
      best = k;
    }
  }
  const complex<double> z = u(best / 2, best % 2);
  return u * (std::abs(z) / z);
}

IntPtm int_compose(const IntPtm& a, const IntPtm& b) {
  IntPtm r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      int s = 0;
      for (int k = 0; k < 4; ++k) s += a[i][k] * b[k][j];
      r[i][j] = static_cast<std::int8_t>(s);
    }
  return r;
}

CliffordTables build_tables() {
  const complex<double> i(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);

  Matrix2cd x90, z90;
  x90 << s, -i * s, -i * s, s;            // exp(-i pi/4 X)
  z90 << std::exp(-i * M_PI / 4.0), 0.0,  // exp(-i pi/4 Z)
      0.0, std::exp(i * M_PI / 4.0);

  // Close {X_pi/2, Z_pi/2} under multiplication, deduplicating by the
  // phase-free transfer matrix.
  std::vector<IntPtm> ptms;
  std::vector<Matrix2cd> unitaries;
  auto find = [&](const IntPtm& p) -> int {
    for (std::size_t k = 0; k < ptms.size(); ++k)
      if (ptms[k] == p) return static_cast<int>(k);
    return -1;
  };
  ptms.push_back(int_ptm_of_unitary(Matrix2cd::Identity()));
  unitaries.push_back(Matrix2cd::Identity());
  const Matrix2cd gens[2] = {x90, z90};
  for (std::size_t head = 0; head < ptms.size(); ++head) {
    for (const auto& g : gens) {
      const Matrix2cd u = g * unitaries[head];
      const IntPtm p = int_ptm_of_unitary(u);
      if (find(p) < 0) {
        ptms.push_back(p);
        unitaries.push_back(canonical_phase(u));
      }
    }
  }
  if (ptms.size() != kCliffordCount)
    throw std::logic_error("Clifford closure has the wrong order");

  // Canonical order: identity first, the rest lexicographic in entries.
  std::vector<int> order(kCliffordCount);
  for (int k = 0; k < kCliffordCount; ++k) order[k] = k;
  const IntPtm id_ptm = int_ptm_of_unitary(Matrix2cd::Identity());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ptms[a] == id_ptm) return ptms[b] != id_ptm;
    if (ptms[b] == id_ptm) return false;
    return ptms[a] < ptms[b];
  });

  CliffordTables t{};
  for (int k = 0; k < kCliffordCount; ++k) {
    t.ptm[k] = ptms[order[k]];
    t.unitary[k] = unitaries[order[k]];
  }
  auto lookup = [&](const IntPtm& p) -> std::uint8_t {
    for (int k = 0; k < kCliffordCount; ++k)
      if (t.ptm[k] == p) return static_cast<std::uint8_t>(k);
    throw std::logic_error("transfer matrix not in the Clifford table");
  };

  for (int a = 0; a < kCliffordCount; ++a)
    for (int b = 0; b < kCliffordCount; ++b)
      t.compose[a][b] = lookup(int_compose(t.ptm[a], t.ptm[b]));

  t.id_idx = lookup(id_ptm);
  for (int a = 0; a < kCliffordCount; ++a) {
    for (int b = 0; b < kCliffordCount; ++b)
      if (t.compose[a][b] == t.id_idx) t.inverse[a] = static_cast<std::uint8_t>(b);
  }

  // Pauli gates and conjugation: conj[c][p] is the diagonal pattern of
  // R_c R_p R_c^-1 with signs dropped.
  std::array<IntPtm, 4> pauli_ptms;
  for (int p = 0; p < 4; ++p)
    pauli_ptms[p] = int_ptm_of_unitary(pauli_matrix(p));
  for (int p = 0; p < 4; ++p) t.pauli_gate[p] = lookup(pauli_ptms[p]);
  for (int c = 0; c < kCliffordCount; ++c) {
    const IntPtm inv = t.ptm[t.inverse[c]];
    for (int p = 0; p < 4; ++p) {
      // Transfer matrices are phase-free, so R_c R_p R_c^-1 is exactly the
      // transfer matrix of the conjugated Pauli.
      const IntPtm m = int_compose(int_compose(t.ptm[c], pauli_ptms[p]), inv);
      int q = -1;
      for (int cand = 0; cand < 4; ++cand)
        if (m == pauli_ptms[cand]) q = cand;
      if (q < 0) throw std::logic_error("Clifford conjugation left the Pauli group");
      t.conj[c][p] = static_cast<std::uint8_t>(q);
    }
  }

  t.x90_idx = lookup(int_ptm_of_unitary(x90));
  t.z90_idx = lookup(int_ptm_of_unitary(z90));
  Matrix2cd y90;
  y90 << s, -s, s, s;  // exp(-i pi/4 Y)
  t.y90_idx = lookup(int_ptm_of_unitary(y90));
  Matrix2cd h;
  h << s, s, s, -s;
  t.hadamard_idx = lookup(int_ptm_of_unitary(h));
  return t;
}

}  // namespace

const CliffordTables& clifford_tables() {
  static const CliffordTables tables = build_tables();
  return tables;
}

}  // namespace detail

Clifford compose(Clifford a, Clifford b) {
  Clifford r;
  r.idx = detail::clifford_tables().compose[a.idx][b.idx];
  return r;
}

Clifford inverse(Clifford c) {
  Clifford r;
  r.idx = detail::clifford_tables().inverse[c.idx];
  return r;
}

Pauli conjugate_pauli(Clifford c, Pauli p) {
  return static_cast<Pauli>(
      detail::clifford_tables().conj[c.idx][static_cast<int>(p)]);
}

Clifford clifford_of_pauli(Pauli p) {
  Clifford r;
  r.idx = detail::clifford_tables().pauli_gate[static_cast<int>(p)];
  return r;
}

Clifford gate_id() { return Clifford(detail::clifford_tables().id_idx); }
Clifford gate_x90() { return Clifford(detail::clifford_tables().x90_idx); }
Clifford gate_y90() { return Clifford(detail::clifford_tables().y90_idx); }
Clifford gate_z90() { return Clifford(detail::clifford_tables().z90_idx); }
Clifford gate_hadamard() {
  return Clifford(detail::clifford_tables().hadamard_idx);
}

std::string gate_label(Clifford c) {
  if (c == gate_id()) return "Gi";
  if (c == gate_x90()) return "Gx";
  if (c == gate_y90()) return "Gy";
  return "C" + std::to_string(static_cast<int>(c.idx));
}

Clifford clifford_from_label(std::string_view token) {
  if (token == "Gi") return gate_id();
  if (token == "Gx") return gate_x90();
  if (token == "Gy") return gate_y90();
  if (token.size() >= 2 && token[0] == 'C') {
    int v = 0;
    for (std::size_t k = 1; k < token.size(); ++k) {
      if (token[k] < '0' || token[k] > '9')
        throw std::invalid_argument("bad gate token: " + std::string(token));
      v = v * 10 + (token[k] - '0');
    }
    return Clifford(v);
  }
  throw std::invalid_argument("bad gate token: " + std::string(token));
}

}  // namespace pfrlab
