#pragma once

#include <cstdint>
#include <vector>

#include "mrem/pauli.hpp"

namespace mrem {

/// A validated set of Z2 Pauli symmetries of a Hamiltonian together with
/// the qubit and single-qubit partner assignment used for tapering and the
/// chosen +-1 eigenvalue sector.
///
/// Generators are kept in a deterministic GF(2)-reduced basis (products of
/// the input generators; sectors are transformed alongside).
struct SymmetrySet {
  std::vector<PauliTerm> generators;  // coefficient +1, mutually commuting
  std::vector<int> tapered_qubits;    // one distinct qubit per generator
  std::vector<char> partners;         // 'X', 'Y' or 'Z' partner per generator
  std::vector<int> sector;            // +1 / -1 per generator

  int size() const { return static_cast<int>(generators.size()); }
};

/// GF(2) basis of all Pauli strings (coefficient 1, identity excluded) that
/// commute with every term of h. Deterministic: Gaussian elimination with
/// lowest-index pivots. Empty when no symmetry exists.
std::vector<PauliTerm> find_symmetries(const PauliSum& h);

/// Eigenvalue of each (Z-type) generator on the basis state |det>.
/// A generator with an X component has no basis-state eigenstates: error.
std::vector<int> sector_of_determinant(std::uint64_t det,
                                       const std::vector<PauliTerm>& generators);

/// Builds the tapering assignment. `sector` must give one +-1 per input
/// generator; it is transformed along with the basis reduction.
SymmetrySet make_symmetry_set(const PauliSum& h, std::vector<PauliTerm> generators,
                              std::vector<int> sector);

/// Convenience: sector picked from a reference determinant.
SymmetrySet make_symmetry_set_for_determinant(const PauliSum& h,
                                              std::vector<PauliTerm> generators,
                                              std::uint64_t reference);

/// Clifford-conjugates h so each generator becomes X on its tapered qubit,
/// substitutes the sector eigenvalue and removes the tapered qubits. The
/// result acts on n - |generators| qubits; its spectrum is a sub-multiset
/// of the original spectrum.
PauliSum taper_operator(const PauliSum& h, const SymmetrySet& sym);

struct ProjectedDeterminant {
  std::uint64_t bits = 0;  // reduced-register bitstring
  int sign = 1;            // amplitude sign picked up by the projection
};

/// Image of a sector-compatible determinant on the reduced register.
/// Distinct determinants in one sector map to distinct reduced bitstrings.
ProjectedDeterminant project_determinant(std::uint64_t det, const SymmetrySet& sym);

}  // namespace mrem
