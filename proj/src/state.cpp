#include "mrem/state.hpp"

#include <cmath>

namespace mrem {

QuantumState QuantumState::basis_state(int n_qubits, std::uint64_t bits) {
  if (n_qubits <= 0 || n_qubits >= 63) throw DimensionError("bad qubit count");
  const std::int64_t dim = std::int64_t{1} << n_qubits;
  if (bits >= static_cast<std::uint64_t>(dim))
    throw DimensionError("basis bitstring outside register");
  QuantumState s;
  s.n_qubits = n_qubits;
  s.form = Form::pure;
  s.vec = Eigen::VectorXcd::Zero(dim);
  s.vec(static_cast<Eigen::Index>(bits)) = 1.0;
  return s;
}

QuantumState QuantumState::from_vector(int n_qubits, Eigen::VectorXcd amplitudes) {
  QuantumState s;
  s.n_qubits = n_qubits;
  s.form = Form::pure;
  s.vec = std::move(amplitudes);
  if (s.vec.size() != s.dim()) throw DimensionError("statevector length mismatch");
  return s;
}

QuantumState QuantumState::from_density(int n_qubits, Eigen::MatrixXcd density) {
  QuantumState s;
  s.n_qubits = n_qubits;
  s.form = Form::mixed;
  s.rho = std::move(density);
  if (s.rho.rows() != s.dim() || s.rho.cols() != s.dim())
    throw DimensionError("density matrix shape mismatch");
  return s;
}

QuantumState QuantumState::to_density() const {
  if (form == Form::mixed) return *this;
  return from_density(n_qubits, vec * vec.adjoint());
}

double QuantumState::normalization_error() const {
  if (form == Form::pure) return std::abs(vec.squaredNorm() - 1.0);
  return std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
}

void QuantumState::validate(double tol) const {
  if (normalization_error() > tol)
    throw ContractError("state is not normalized");
  if (form == Form::mixed) {
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-8) throw ContractError("density matrix is not Hermitian");
  }
}

}  // namespace mrem
