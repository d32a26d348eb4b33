#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mrem/errors.hpp"
#include "mrem/state.hpp"

namespace mrem {

using Complex = std::complex<double>;

// Size ceilings. Dense realization is meant for oracles and desk-scale
// diagonalization; symmetry search only does GF(2) work and can go wider.
inline constexpr int kMaxDenseQubits = 12;
inline constexpr int kMaxSymmetryQubits = 24;
inline constexpr int kMaxLabelQubits = 64;

// Coefficients below this magnitude are dropped during normalization.
inline constexpr double kCoeffCutoff = 1e-14;

// Maximum per-term imaginary part for a sum to count as Hermitian.
inline constexpr double kHermiticityTol = 1e-10;

/// One coefficient-weighted Pauli string in symplectic (x, z) mask form.
///
/// Bit q of x_mask set means an X component on qubit q; bit q of z_mask a Z
/// component; both set mean Y. The stored string is the literal tensor
/// product of I/X/Y/Z factors (each factor Hermitian), so a term is
/// Hermitian exactly when its coefficient is real.
struct PauliTerm {
  int n_qubits = 0;
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  Complex coeff = {1.0, 0.0};

  static PauliTerm identity(int n_qubits, Complex coeff = {1.0, 0.0});

  /// Parses a label such as "XIZY"; the rightmost character is qubit 0.
  static PauliTerm from_label(const std::string& label, Complex coeff = {1.0, 0.0});

  /// Inverse of from_label; round-trips losslessly.
  std::string label() const;

  bool is_identity() const { return x_mask == 0 && z_mask == 0; }

  /// Symplectic-form commutation test (exact, coefficient-independent).
  bool commutes_with(const PauliTerm& other) const;

  void validate() const;
};

/// Pauli product with the phase tracked exactly: masks XOR, coefficient
/// picks up i^k from per-qubit anticommutation counting.
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);

/// A sum of Pauli strings over a fixed register width.
struct PauliSum {
  int n_qubits = 0;
  std::vector<PauliTerm> terms;

  PauliSum() = default;
  explicit PauliSum(int n) : n_qubits(n) {}

  static PauliSum zero(int n_qubits) { return PauliSum(n_qubits); }

  std::size_t size() const { return terms.size(); }

  void add_term(PauliTerm term);

  /// Merges duplicate (x, z) strings, drops negligible coefficients and
  /// sorts terms by (z_mask, x_mask). Idempotent.
  void normalize();

  /// True when every (normalized) coefficient is real within tol.
  bool is_hermitian(double tol = kHermiticityTol) const;

  /// Largest |coeff| over terms; 0 for the empty sum.
  double max_abs_coeff() const;

  /// Sum of |coeff| over terms (1-norm of the coefficient vector).
  double coeff_one_norm() const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator*=(Complex scale);
};

PauliSum operator+(PauliSum a, const PauliSum& b);
PauliSum operator*(Complex scale, PauliSum a);

/// Distributes term products; result is normalized.
PauliSum multiply(const PauliSum& a, const PauliSum& b);

/// a*b - b*a, normalized (empty sum when a and b commute).
PauliSum commutator(const PauliSum& a, const PauliSum& b);

bool equal(const PauliSum& a, const PauliSum& b, double tol = 1e-12);

/// Parses the Hamiltonian text format: one term per line,
/// `coeff_re [coeff_im] LABEL`, '#' comments, rightmost label char = qubit 0.
/// Duplicate labels merge by coefficient addition.
PauliSum parse_pauli_sum(std::istream& in);
PauliSum parse_pauli_sum(const std::string& text);
PauliSum read_pauli_sum_file(const std::string& path);

/// Emits terms sorted by (z_mask, x_mask) with 17-significant-digit
/// coefficients; parse(serialize(s)) == s for normalized sums.
std::string serialize(const PauliSum& sum);
void write_pauli_sum_file(const PauliSum& sum, const std::string& path);

/// Dense 2^n x 2^n realization; qubit 0 at the least significant tensor slot.
Eigen::MatrixXcd to_dense(const PauliSum& sum);

/// <psi|H|psi> or tr(rho H), term by term, without the dense matrix.
/// Requires h Hermitian; an imaginary residue above tolerance is an error.
double expectation(const PauliSum& h, const QuantumState& psi);
double expectation(const PauliSum& h, const Eigen::VectorXcd& amplitudes);
double expectation(const PauliSum& h, const Eigen::MatrixXcd& density);

struct GroundState {
  double energy = 0.0;
  QuantumState state;
};

/// Minimal eigenvalue and eigenvector by dense diagonalization (n <= 12).
GroundState exact_ground_state(const PauliSum& h);

}  // namespace mrem
