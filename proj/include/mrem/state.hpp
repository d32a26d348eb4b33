#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "mrem/errors.hpp"

namespace mrem {

// Basis indexing convention used across the library: qubit 0 occupies the
// least-significant bit of a basis index, i.e. the rightmost character of a
// ket label. |q_{n-1} ... q_1 q_0> has index sum_k q_k 2^k.
inline constexpr int kQubitZeroIsLsb = 1;

/// An n-qubit state, either a pure statevector or a density matrix.
struct QuantumState {
  enum class Form { pure, mixed };

  int n_qubits = 0;
  Form form = Form::pure;
  Eigen::VectorXcd vec;  // 2^n amplitudes when pure
  Eigen::MatrixXcd rho;  // 2^n x 2^n when mixed

  std::int64_t dim() const { return std::int64_t{1} << n_qubits; }
  bool is_pure() const { return form == Form::pure; }

  static QuantumState basis_state(int n_qubits, std::uint64_t bits);
  static QuantumState from_vector(int n_qubits, Eigen::VectorXcd amplitudes);
  static QuantumState from_density(int n_qubits, Eigen::MatrixXcd density);

  // Projector |psi><psi| of a pure state, as a mixed-form state.
  QuantumState to_density() const;

  // Norm (pure) or trace (mixed) deviation from 1.
  double normalization_error() const;

  // Checks normalization within tol and, for mixed states, Hermiticity.
  void validate(double tol = 1e-10) const;
};

}  // namespace mrem
