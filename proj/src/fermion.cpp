#include "mrem/fermion.hpp"

namespace mrem {

void OrbitalLayout::validate() const {
  if (n_spatial <= 0 || n_spatial > 32) throw DimensionError("bad spatial orbital count");
  if (n_alpha < 0 || n_beta < 0 || n_alpha + n_beta > 2 * n_spatial)
    throw DimensionError("electron count exceeds spin-orbital count");
}

void SpinPenaltyConfig::validate() const {
  if (lambda < 0.0) throw ContractError("spin penalty must be non-negative");
}

PauliSum jw_excitation(int p, int q, int n_qubits) {
  if (p < 0 || q < 0 || p >= n_qubits || q >= n_qubits)
    throw DimensionError("spin-orbital index outside register");

  PauliSum out(n_qubits);
  const std::uint64_t bp = std::uint64_t{1} << p;

  if (p == q) {
    out.add_term(PauliTerm::identity(n_qubits, 0.5));
    out.add_term(PauliTerm{n_qubits, 0, bp, -0.5});
    out.normalize();
    return out;
  }

  // sigma+_p sigma-_q with the parity Z string strictly between p and q:
  // (X_p - iY_p)(X_q + iY_q)/4 expanded into four Pauli strings.
  const std::uint64_t bq = std::uint64_t{1} << q;
  const int lo = std::min(p, q), hi = std::max(p, q);
  std::uint64_t zstring = 0;
  for (int k = lo + 1; k < hi; ++k) zstring |= std::uint64_t{1} << k;

  const Complex quarter{0.25, 0.0};
  const Complex iq{0.0, 0.25};
  // X_p X_q, i X_p Y_q, -i Y_p X_q, Y_p Y_q
  out.add_term(PauliTerm{n_qubits, bp | bq, zstring, quarter});
  out.add_term(PauliTerm{n_qubits, bp | bq, zstring | bq, iq});
  out.add_term(PauliTerm{n_qubits, bp | bq, zstring | bp, -iq});
  out.add_term(PauliTerm{n_qubits, bp | bq, zstring | bp | bq, quarter});
  out.normalize();
  return out;
}

std::uint64_t hf_bitstring(const OrbitalLayout& layout) {
  layout.validate();
  std::uint64_t bits = 0;
  for (int p = 0; p < layout.n_alpha; ++p) bits |= std::uint64_t{1} << (2 * p);
  for (int p = 0; p < layout.n_beta; ++p) bits |= std::uint64_t{1} << (2 * p + 1);
  return bits;
}

PauliSum number_operator(int n_qubits) {
  PauliSum n_op(n_qubits);
  for (int p = 0; p < n_qubits; ++p) {
    n_op.add_term(PauliTerm::identity(n_qubits, 0.5));
    n_op.add_term(PauliTerm{n_qubits, 0, std::uint64_t{1} << p, -0.5});
  }
  n_op.normalize();
  return n_op;
}

PauliSum s_squared_operator(const OrbitalLayout& layout) {
  layout.validate();
  const int n = layout.n_qubits();

  PauliSum s_plus(n);   // sum_p a^dag_{p,alpha} a_{p,beta}
  PauliSum s_minus(n);  // adjoint of s_plus
  PauliSum s_z(n);
  for (int p = 0; p < layout.n_spatial; ++p) {
    s_plus += jw_excitation(2 * p, 2 * p + 1, n);
    s_minus += jw_excitation(2 * p + 1, 2 * p, n);
    s_z += Complex{0.5, 0.0} * jw_excitation(2 * p, 2 * p, n);
    s_z += Complex{-0.5, 0.0} * jw_excitation(2 * p + 1, 2 * p + 1, n);
  }

  PauliSum s_z_plus_one = s_z;
  s_z_plus_one.add_term(PauliTerm::identity(n, 1.0));
  s_z_plus_one.normalize();

  PauliSum s2 = multiply(s_minus, s_plus);
  s2 += multiply(s_z, s_z_plus_one);
  return s2;
}

PauliSum add_spin_penalty(const PauliSum& h, const OrbitalLayout& layout,
                          const SpinPenaltyConfig& cfg) {
  layout.validate();
  cfg.validate();
  if (h.n_qubits != layout.n_qubits())
    throw DimensionError("spin penalty needs the untapered register");
  PauliSum out = h;
  out += Complex{cfg.lambda, 0.0} * s_squared_operator(layout);
  return out;
}

}  // namespace mrem
