#pragma once

// Shared derived fixtures: a 4-qubit two-orbital Hamiltonian family in the
// stretched-bond regime (strong two-determinant ground state), built from
// Jordan-Wigner excitation operators.

#include <cstdlib>
#include <string>

#include "mrem/fermion.hpp"
#include "mrem/pauli.hpp"

namespace fixtures {

struct TwoOrbitalParams {
  double h0 = -1.25;   // orbital energies
  double h1 = -1.10;
  double j00 = 0.67;   // Coulomb integrals
  double j11 = 0.70;
  double j01 = 0.66;
  double k01 = 0.18;   // exchange / pair-hop integral
};

// Interleaved spin-orbitals: 0 = (0,a), 1 = (0,b), 2 = (1,a), 3 = (1,b).
inline mrem::PauliSum two_orbital_hamiltonian(const TwoOrbitalParams& p = {}) {
  using mrem::Complex;
  using mrem::PauliSum;
  const int n = 4;
  auto ex = [&](int a, int b) { return mrem::jw_excitation(a, b, n); };
  auto num = [&](int a) { return ex(a, a); };

  PauliSum h(n);
  h += Complex{p.h0, 0} * (num(0) + num(1));
  h += Complex{p.h1, 0} * (num(2) + num(3));
  h += Complex{p.j00, 0} * multiply(num(0), num(1));
  h += Complex{p.j11, 0} * multiply(num(2), num(3));
  h += Complex{p.j01, 0} * (multiply(num(0), num(3)) + multiply(num(1), num(2)));
  h += Complex{p.j01 - p.k01, 0} * (multiply(num(0), num(2)) + multiply(num(1), num(3)));
  // pair hop between the two closed-shell determinants
  h += Complex{p.k01, 0} * (multiply(ex(2, 0), ex(3, 1)) + multiply(ex(0, 2), ex(1, 3)));
  // spin exchange in the open-shell block
  h += Complex{p.k01, 0} * (multiply(ex(0, 2), ex(3, 1)) + multiply(ex(2, 0), ex(1, 3)));
  h.normalize();
  return h;
}

inline mrem::OrbitalLayout two_orbital_layout() { return {2, 1, 1}; }

// Path of the repository fixtures tree, set by the build or by ctest.
inline std::string fixture_dir() {
  if (const char* env = std::getenv("MREM_FIXTURE_DIR")) return env;
#ifdef MREM_FIXTURE_DIR_DEFAULT
  return MREM_FIXTURE_DIR_DEFAULT;
#else
  return "fixtures";
#endif
}

}  // namespace fixtures
