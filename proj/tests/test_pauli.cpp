#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "mrem/pauli.hpp"
#include "support/oracles.hpp"

using namespace mrem;

TEST_CASE("labels round-trip through the mask form") {
  for (const char* label : {"I", "X", "Y", "Z", "XYZI", "IIZX", "YYYY"}) {
    const PauliTerm t = PauliTerm::from_label(label);
    CHECK(t.label() == label);
  }
  // rightmost character is qubit 0
  const PauliTerm t = PauliTerm::from_label("XI");
  CHECK(t.x_mask == 0b10);
  CHECK(t.z_mask == 0);
}

TEST_CASE("single-qubit products carry exact phases") {
  auto prod = [](const char* a, const char* b) {
    return multiply(PauliTerm::from_label(a), PauliTerm::from_label(b));
  };
  CHECK(prod("X", "X").label() == "I");
  CHECK(prod("X", "X").coeff == Complex{1, 0});
  // X Z = -i Y
  const PauliTerm xz = prod("X", "Z");
  CHECK(xz.label() == "Y");
  CHECK(xz.coeff == Complex{0, -1});
  const PauliTerm zx = prod("Z", "X");
  CHECK(zx.coeff == Complex{0, 1});
}

TEST_CASE("products match dense Kronecker multiplication") {
  oracle::Rng rng(71);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = rng.integer(1, 4);
    const PauliTerm a = rng.random_term(n, false);
    const PauliTerm b = rng.random_term(n, false);
    const PauliTerm p = multiply(a, b);
    PauliSum pa(n), pb(n), pp(n);
    pa.add_term(a);
    pb.add_term(b);
    pp.add_term(p);
    const auto diff = oracle::max_abs_diff(oracle::sum_matrix(pa) * oracle::sum_matrix(pb),
                                           oracle::sum_matrix(pp));
    CHECK(diff < 1e-12);
  }
}

TEST_CASE("commutation sign relates the two product orders") {
  oracle::Rng rng(72);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.integer(1, 6);
    PauliTerm a = rng.random_term(n, false);
    PauliTerm b = rng.random_term(n, false);
    a.coeff = b.coeff = 1.0;
    const Complex ab = multiply(a, b).coeff;
    const Complex ba = multiply(b, a).coeff;
    const double sign = a.commutes_with(b) ? 1.0 : -1.0;
    CHECK(std::abs(ab - sign * ba) < 1e-15);
  }
}

TEST_CASE("parser handles the documented form") {
  const PauliSum id2 = parse_pauli_sum("1.0 II");
  CHECK(id2.n_qubits == 2);
  REQUIRE(id2.terms.size() == 1);
  CHECK(id2.terms[0].is_identity());
  CHECK(id2.terms[0].coeff == Complex{1, 0});

  const PauliSum merged = parse_pauli_sum("0.5 ZI\n0.5 ZI");
  REQUIRE(merged.terms.size() == 1);
  CHECK(merged.terms[0].label() == "ZI");
  CHECK(merged.terms[0].coeff.real() == doctest::Approx(1.0));

  const PauliSum with_comment = parse_pauli_sum("# header\n1.0 0.5 XY # trailing\n");
  REQUIRE(with_comment.terms.size() == 1);
  CHECK(with_comment.terms[0].coeff == Complex{1.0, 0.5});

  CHECK(parse_pauli_sum("").terms.empty());
}

TEST_CASE("parser reports the offending line") {
  auto line_of = [](const char* text) {
    try {
      parse_pauli_sum(text);
    } catch (const ParseError& e) {
      return e.line;
    }
    return -1;
  };
  CHECK(line_of("1.0 XX\n1.0 XQ") == 2);
  CHECK(line_of("1.0 XX\n1.0 XXX") == 2);
  CHECK(line_of("abc XX") == 1);
  CHECK(line_of("1.0 2.0 3.0 XX") == 1);
}

TEST_CASE("serializer round-trips random sums") {
  oracle::Rng rng(73);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.integer(1, 6);
    PauliSum sum = rng.random_sum(n, rng.integer(1, 8), false);
    const PauliSum back = parse_pauli_sum(serialize(sum));
    CHECK(equal(sum, back, 1e-15));
  }
}

TEST_CASE("dense realization matches the definitions") {
  const Eigen::MatrixXcd z = to_dense(parse_pauli_sum("1.0 Z"));
  CHECK(z(0, 0) == Complex{1, 0});
  CHECK(z(1, 1) == Complex{-1, 0});
  CHECK(std::abs(z(0, 1)) + std::abs(z(1, 0)) == 0.0);

  const Eigen::MatrixXcd x = to_dense(parse_pauli_sum("1.0 X"));
  CHECK(x(0, 1) == Complex{1, 0});
  CHECK(x(1, 0) == Complex{1, 0});

  oracle::Rng rng(74);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(1, 4);
    const PauliSum sum = rng.random_sum(n, rng.integer(1, 10), true);
    const Eigen::MatrixXcd m = to_dense(sum);
    CHECK(oracle::max_abs_diff(m, m.adjoint()) < 1e-12);
    CHECK(oracle::max_abs_diff(m, oracle::sum_matrix(sum)) < 1e-12);
  }

  PauliSum wide(13);
  wide.add_term(PauliTerm::identity(13));
  CHECK_THROWS_AS(to_dense(wide), CapacityError);
}

TEST_CASE("expectation on basis and superposition states") {
  const PauliSum z0 = parse_pauli_sum("1.0 IIZ");
  CHECK(expectation(z0, QuantumState::basis_state(3, 0)) == doctest::Approx(1.0));

  Eigen::VectorXcd plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(expectation(parse_pauli_sum("1.0 X"), QuantumState::from_vector(1, plus)) ==
        doctest::Approx(1.0));
}

TEST_CASE("expectation matches the dense quadratic form") {
  oracle::Rng rng(75);
  for (int trial = 0; trial < 200; ++trial) {
    const PauliSum h = rng.random_sum(4, rng.integer(1, 12), true);
    const Eigen::VectorXcd psi = rng.random_state(4);
    const double via_terms = expectation(h, QuantumState::from_vector(4, psi));
    const double via_dense = (psi.adjoint() * oracle::sum_matrix(h) * psi)(0, 0).real();
    const double scale = std::max(1.0, h.coeff_one_norm());
    CHECK(std::abs(via_terms - via_dense) < 1e-12 * scale);
  }
}

TEST_CASE("density-matrix expectation matches the dense trace") {
  oracle::Rng rng(76);
  for (int trial = 0; trial < 50; ++trial) {
    const PauliSum h = rng.random_sum(3, rng.integer(1, 10), true);
    // random mixed state from two pure components
    const Eigen::VectorXcd a = rng.random_state(3);
    const Eigen::VectorXcd b = rng.random_state(3);
    Eigen::MatrixXcd rho = 0.3 * (a * a.adjoint()) + 0.7 * (b * b.adjoint());
    const double via_terms = expectation(h, QuantumState::from_density(3, rho));
    const double via_dense = (oracle::sum_matrix(h) * rho).trace().real();
    CHECK(std::abs(via_terms - via_dense) < 1e-12 * std::max(1.0, h.coeff_one_norm()));
  }
}

TEST_CASE("expectation rejects bad inputs") {
  PauliSum nonherm(1);
  nonherm.add_term(PauliTerm::from_label("X", Complex{0, 1}));
  CHECK_THROWS_AS(expectation(nonherm, QuantumState::basis_state(1, 0)), ContractError);
  CHECK_THROWS_AS(expectation(parse_pauli_sum("1.0 XX"), QuantumState::basis_state(1, 0)),
                  DimensionError);
}

TEST_CASE("exact ground state of single-term sums") {
  const GroundState gz = exact_ground_state(parse_pauli_sum("-1.0 Z"));
  CHECK(gz.energy == doctest::Approx(-1.0));
  CHECK(std::abs(gz.state.vec(0)) == doctest::Approx(1.0));

  // with the opposite sign the excited computational state wins
  const GroundState gp = exact_ground_state(parse_pauli_sum("1.0 Z"));
  CHECK(gp.energy == doctest::Approx(-1.0));
  CHECK(std::abs(gp.state.vec(1)) == doctest::Approx(1.0));

  CHECK(exact_ground_state(parse_pauli_sum("1.0 X")).energy == doctest::Approx(-1.0));
}

TEST_CASE("exact ground state matches the dense spectrum minimum") {
  oracle::Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const PauliSum h = rng.random_sum(6, rng.integer(2, 16), true);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(oracle::sum_matrix(h));
    const GroundState gs = exact_ground_state(h);
    CHECK(std::abs(gs.energy - solver.eigenvalues()(0)) < 1e-10);
  }
}

TEST_CASE("ground energy is a lower bound on expectations") {
  oracle::Rng rng(78);
  const PauliSum h = rng.random_sum(4, 10, true);
  const GroundState gs = exact_ground_state(h);
  for (int trial = 0; trial < 100; ++trial) {
    const double e = expectation(h, QuantumState::from_vector(4, rng.random_state(4)));
    CHECK(e >= gs.energy - 1e-10);
  }
}
