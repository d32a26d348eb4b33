#pragma once

#include <cstdint>

#include "mrem/pauli.hpp"

namespace mrem {

/// Spin-orbital bookkeeping under the interleaved ordering: spin-orbital
/// 2p is (spatial p, alpha), 2p+1 is (spatial p, beta). Jordan-Wigner maps
/// spin-orbital q onto qubit q, so the register width is 2 * n_spatial.
struct OrbitalLayout {
  int n_spatial = 0;
  int n_alpha = 0;
  int n_beta = 0;

  int n_qubits() const { return 2 * n_spatial; }
  int n_electrons() const { return n_alpha + n_beta; }
  void validate() const;
};

struct SpinPenaltyConfig {
  double lambda = 0.0;  // Hartree per unit of S^2 eigenvalue

  void validate() const;
};

/// Jordan-Wigner image of the excitation a^dag_p a_q on an n-qubit register.
/// For p == q this is the number operator (I - Z_p)/2; otherwise the
/// sigma+_p sigma-_q product with a Z string strictly between min and max.
PauliSum jw_excitation(int p, int q, int n_qubits);

/// Determinant with the alpha spin-orbitals of the lowest n_alpha spatial
/// orbitals and the beta spin-orbitals of the lowest n_beta occupied. For
/// n_alpha == n_beta this is the n_e ones in the least significant positions.
std::uint64_t hf_bitstring(const OrbitalLayout& layout);

/// JW image of the total particle-number operator sum_p (I - Z_p)/2.
PauliSum number_operator(int n_qubits);

/// JW image of S^2 = S_- S_+ + S_z (S_z + 1), assembled from excitation
/// operators; Hermitian with eigenvalues of the form S(S+1).
PauliSum s_squared_operator(const OrbitalLayout& layout);

/// H + lambda * S^2 on the untapered 2 * n_spatial register.
PauliSum add_spin_penalty(const PauliSum& h, const OrbitalLayout& layout,
                          const SpinPenaltyConfig& cfg);

}  // namespace mrem
