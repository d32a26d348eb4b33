#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mrem/fermion.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace mrem;

TEST_CASE("number operator form of the diagonal excitation") {
  const PauliSum n0 = jw_excitation(0, 0, 2);
  REQUIRE(n0.terms.size() == 2);
  CHECK(equal(n0, parse_pauli_sum("0.5 II\n-0.5 IZ")));
}

TEST_CASE("excitation indices are range checked") {
  CHECK_THROWS_AS(jw_excitation(0, 4, 4), DimensionError);
  CHECK_THROWS_AS(jw_excitation(-1, 0, 4), DimensionError);
}

TEST_CASE("excitation plus its reverse is Hermitian") {
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      PauliSum sum = jw_excitation(p, q, 4);
      sum += jw_excitation(q, p, 4);
      CHECK(sum.is_hermitian());
    }
}

TEST_CASE("excitations match occupation-number enumeration") {
  // the JW image must equal the textbook fermionic matrix entry for entry
  for (int n : {2, 4}) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const Eigen::MatrixXcd jw = oracle::sum_matrix(jw_excitation(p, q, n));
        const Eigen::MatrixXcd ref = oracle::hop_matrix(p, q, n);
        CHECK(oracle::max_abs_diff(jw, ref) < 1e-13);
      }
  }
  // the explicit 4x4 hop of the specification example
  PauliSum hop = jw_excitation(0, 1, 2);
  hop += jw_excitation(1, 0, 2);
  const Eigen::MatrixXcd ref = oracle::hop_matrix(0, 1, 2) + oracle::hop_matrix(1, 0, 2);
  CHECK(oracle::max_abs_diff(oracle::sum_matrix(hop), ref) < 1e-13);
}

TEST_CASE("excitations conserve particle number") {
  const PauliSum n_op = number_operator(6);
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      const PauliSum comm = commutator(jw_excitation(p, q, 6), n_op);
      CHECK(comm.terms.empty());
    }
}

TEST_CASE("reference determinants under interleaved ordering") {
  CHECK(hf_bitstring({4, 2, 2}) == 0b00001111);
  CHECK(hf_bitstring({2, 1, 1}) == 0b0011);
  CHECK(hf_bitstring({3, 0, 0}) == 0);
  // unequal spin counts occupy the lowest orbitals of each spin
  CHECK(hf_bitstring({2, 2, 0}) == 0b0101);
  CHECK_THROWS_AS(hf_bitstring({1, 2, 2}), DimensionError);
}

TEST_CASE("total spin on reference determinants") {
  const PauliSum s2_m1 = s_squared_operator({1, 0, 0});
  CHECK(expectation(s2_m1, QuantumState::basis_state(2, 0)) == doctest::Approx(0.0));
  // one alpha electron: S = 1/2
  CHECK(expectation(s2_m1, QuantumState::basis_state(2, 0b01)) == doctest::Approx(0.75));

  // two same-spin electrons: triplet, S = 1
  const PauliSum s2_m2 = s_squared_operator({2, 0, 0});
  CHECK(expectation(s2_m2, QuantumState::basis_state(4, 0b0101)) == doctest::Approx(2.0));
}

TEST_CASE("spin operator algebra") {
  for (int m = 1; m <= 3; ++m) {
    const OrbitalLayout layout{m, 0, 0};
    const int n = layout.n_qubits();
    const PauliSum s2 = s_squared_operator(layout);
    CHECK(s2.is_hermitian());
    CHECK(commutator(s2, number_operator(n)).terms.empty());

    PauliSum s_z(n);
    for (int p = 0; p < m; ++p) {
      s_z += Complex{0.5, 0} * jw_excitation(2 * p, 2 * p, n);
      s_z += Complex{-0.5, 0} * jw_excitation(2 * p + 1, 2 * p + 1, n);
    }
    CHECK(commutator(s_z, s2).terms.empty());

    // every eigenvalue has the form S(S+1) for half-integer S >= 0
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_dense(s2));
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      const double ev = solver.eigenvalues()(i);
      bool matched = false;
      for (int twice_s = 0; twice_s <= 2 * m; ++twice_s) {
        const double s = twice_s / 2.0;
        if (std::abs(ev - s * (s + 1)) < 1e-10) matched = true;
      }
      CHECK(matched);
    }
  }
}

TEST_CASE("zero spin penalty leaves the Hamiltonian unchanged") {
  const PauliSum h = fixtures::two_orbital_hamiltonian();
  const PauliSum h0 = add_spin_penalty(h, fixtures::two_orbital_layout(), {0.0});
  CHECK(equal(h, h0));
}

TEST_CASE("spin penalty preserves a singlet ground state") {
  const PauliSum h = fixtures::two_orbital_hamiltonian();
  const double e0 = exact_ground_state(h).energy;
  const PauliSum hp = add_spin_penalty(h, fixtures::two_orbital_layout(), {0.1});
  CHECK(exact_ground_state(hp).energy == doctest::Approx(e0).epsilon(1e-12));
}

TEST_CASE("spin penalty shifts a triplet ground state by 2 lambda") {
  // -S^2 has the triplet manifold as its ground space on two orbitals
  const OrbitalLayout layout{2, 0, 0};
  const PauliSum s2 = s_squared_operator(layout);
  PauliSum h = Complex{-1.0, 0} * s2;
  const double e0 = exact_ground_state(h).energy;
  CHECK(e0 == doctest::Approx(-2.0));
  const PauliSum hp = add_spin_penalty(h, layout, {0.5});
  CHECK(exact_ground_state(hp).energy == doctest::Approx(e0 + 2 * 0.5));
}

TEST_CASE("spin penalty rejects width mismatches") {
  const PauliSum h = parse_pauli_sum("1.0 ZZ");
  CHECK_THROWS_AS(add_spin_penalty(h, {2, 1, 1}, {0.1}), DimensionError);
}
