#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "mrem/taper.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace mrem;

namespace {

Eigen::VectorXd sorted_eigenvalues(const PauliSum& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_dense(h));
  return solver.eigenvalues();
}

// every eigenvalue of `sub` matches a distinct eigenvalue of `full`
bool spectrum_sub_multiset(const Eigen::VectorXd& sub, const Eigen::VectorXd& full,
                           double tol) {
  std::vector<double> pool(full.data(), full.data() + full.size());
  for (Eigen::Index i = 0; i < sub.size(); ++i) {
    auto it = std::min_element(pool.begin(), pool.end(), [&](double a, double b) {
      return std::abs(a - sub(i)) < std::abs(b - sub(i));
    });
    if (it == pool.end() || std::abs(*it - sub(i)) > tol) return false;
    pool.erase(it);
  }
  return true;
}

// GF(2) span membership by subset enumeration (basis sizes here are tiny)
bool in_span(const PauliTerm& t, const std::vector<PauliTerm>& basis) {
  const std::size_t k = basis.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::uint64_t xs = 0, zs = 0;
    for (std::size_t i = 0; i < k; ++i)
      if ((mask >> i) & 1) {
        xs ^= basis[i].x_mask;
        zs ^= basis[i].z_mask;
      }
    if (xs == t.x_mask && zs == t.z_mask) return true;
  }
  return false;
}

PauliSum planted_symmetry_hamiltonian(oracle::Rng& rng, int n, PauliTerm& planted) {
  planted = PauliTerm::identity(n);
  while (planted.z_mask == 0) planted.z_mask = rng.engine() & ((std::uint64_t{1} << n) - 1);
  PauliSum h(n);
  const int terms = rng.integer(4, 10);
  while (static_cast<int>(h.terms.size()) < terms) {
    PauliTerm t = rng.random_term(n, true);
    if (t.commutes_with(planted)) h.add_term(t);
  }
  h.normalize();
  return h;
}

}  // namespace

TEST_CASE("symmetries of the two-qubit toy Hamiltonian") {
  const PauliSum h = parse_pauli_sum("1.0 XX\n1.0 ZZ");
  const auto gens = find_symmetries(h);
  REQUIRE(gens.size() == 2);
  for (const auto& g : gens)
    for (const auto& t : h.terms) CHECK(g.commutes_with(t));
  CHECK(in_span(PauliTerm::from_label("XX"), gens));
  CHECK(in_span(PauliTerm::from_label("ZZ"), gens));
}

TEST_CASE("a maximally non-commuting single qubit has no symmetry") {
  CHECK(find_symmetries(parse_pauli_sum("1.0 X\n1.0 Z")).empty());
}

TEST_CASE("kernel dimension matches brute-force commutant enumeration") {
  oracle::Rng rng(81);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.integer(2, 3);
    const PauliSum h = rng.random_sum(n, rng.integer(1, 6), true);
    if (h.terms.empty()) continue;
    const auto gens = find_symmetries(h);
    // enumerate all strings over the register
    long commuting = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
      for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z) {
        const PauliTerm cand{n, x, z, 1.0};
        bool ok = true;
        for (const auto& t : h.terms)
          if (!cand.commutes_with(t)) ok = false;
        if (ok) ++commuting;
      }
    CHECK(commuting == (long{1} << gens.size()));
    for (const auto& g : gens)
      for (const auto& t : h.terms) CHECK(g.commutes_with(t));
  }
}

TEST_CASE("the two-orbital Hamiltonian has exactly three symmetries") {
  const PauliSum h = fixtures::two_orbital_hamiltonian();
  const auto gens = find_symmetries(h);
  CHECK(gens.size() == 3);
  for (const auto& g : gens) CHECK(g.x_mask == 0);  // all diagonal
}

TEST_CASE("determinant sectors are parities") {
  const std::vector<PauliTerm> zz{PauliTerm::from_label("ZZ")};
  CHECK(sector_of_determinant(0b11, zz) == std::vector<int>{1});
  CHECK(sector_of_determinant(0b01, zz) == std::vector<int>{-1});
  const std::vector<PauliTerm> xx{PauliTerm::from_label("XX")};
  CHECK_THROWS_AS(sector_of_determinant(0b00, xx), SectorError);
}

TEST_CASE("tapering the two-orbital Hamiltonian to one qubit") {
  const PauliSum h = fixtures::two_orbital_hamiltonian();
  const double e0 = exact_ground_state(h).energy;
  const std::uint64_t hf = hf_bitstring(fixtures::two_orbital_layout());

  const SymmetrySet sym = make_symmetry_set_for_determinant(h, find_symmetries(h), hf);
  const PauliSum reduced = taper_operator(h, sym);
  CHECK(reduced.n_qubits == 1);
  CHECK(reduced.is_hermitian());
  CHECK(std::abs(exact_ground_state(reduced).energy - e0) < 1e-10);
  CHECK(spectrum_sub_multiset(sorted_eigenvalues(reduced), sorted_eigenvalues(h), 1e-10));
}

TEST_CASE("identity Hamiltonians taper to identity") {
  const PauliSum h = parse_pauli_sum("2.5 IIII");
  std::vector<PauliTerm> gens{PauliTerm::from_label("ZZII"), PauliTerm::from_label("IIZZ")};
  const SymmetrySet sym = make_symmetry_set(h, gens, {1, -1});
  const PauliSum reduced = taper_operator(h, sym);
  CHECK(reduced.n_qubits == 2);
  REQUIRE(reduced.terms.size() == 1);
  CHECK(reduced.terms[0].is_identity());
  CHECK(reduced.terms[0].coeff.real() == doctest::Approx(2.5));
}

TEST_CASE("projection fixes the all-zeros determinant") {
  const PauliSum h = parse_pauli_sum("1.0 ZZZZ");
  std::vector<PauliTerm> gens{PauliTerm::from_label("IIZZ"), PauliTerm::from_label("ZZII")};
  const SymmetrySet sym = make_symmetry_set_for_determinant(h, gens, 0);
  const ProjectedDeterminant p = project_determinant(0, sym);
  CHECK(p.bits == 0);
  CHECK(p.sign == 1);
}

TEST_CASE("projection rejects determinants outside the sector") {
  const PauliSum h = fixtures::two_orbital_hamiltonian();
  const std::uint64_t hf = hf_bitstring(fixtures::two_orbital_layout());
  const SymmetrySet sym = make_symmetry_set_for_determinant(h, find_symmetries(h), hf);
  CHECK_THROWS_AS(project_determinant(0b0001, sym), SectorError);
}

TEST_CASE("projection is injective within a sector") {
  const PauliSum h = fixtures::two_orbital_hamiltonian();
  const std::uint64_t hf = hf_bitstring(fixtures::two_orbital_layout());
  const SymmetrySet sym = make_symmetry_set_for_determinant(h, find_symmetries(h), hf);

  std::set<std::uint64_t> images;
  int in_sector = 0;
  for (std::uint64_t det = 0; det < 16; ++det) {
    const auto eigs = sector_of_determinant(det, sym.generators);
    if (eigs != sym.sector) continue;
    ++in_sector;
    images.insert(project_determinant(det, sym).bits);
  }
  CHECK(in_sector == 2);  // 4 qubits, 3 generators: sectors hold 2 determinants
  CHECK(static_cast<int>(images.size()) == in_sector);
}

TEST_CASE("projected superpositions keep their energy") {
  const PauliSum h = fixtures::two_orbital_hamiltonian();
  const GroundState gs = exact_ground_state(h);
  const std::uint64_t hf = hf_bitstring(fixtures::two_orbital_layout());
  const SymmetrySet sym = make_symmetry_set_for_determinant(h, find_symmetries(h), hf);
  const PauliSum reduced = taper_operator(h, sym);

  // the ground state lives on the two closed-shell determinants
  const double a = gs.state.vec(0b0011).real();
  const double b = gs.state.vec(0b1100).real();
  REQUIRE(a * a + b * b == doctest::Approx(1.0).epsilon(1e-9));

  const auto pa = project_determinant(0b0011, sym);
  const auto pb = project_determinant(0b1100, sym);
  Eigen::VectorXcd red = Eigen::VectorXcd::Zero(1 << reduced.n_qubits);
  red(static_cast<Eigen::Index>(pa.bits)) = a * pa.sign;
  red(static_cast<Eigen::Index>(pb.bits)) = b * pb.sign;
  const double e_red = expectation(reduced, QuantumState::from_vector(reduced.n_qubits, red));
  CHECK(e_red == doctest::Approx(gs.energy).epsilon(1e-10));
}

TEST_CASE("tapered spectra of planted-symmetry Hamiltonians") {
  oracle::Rng rng(82);
  int exercised = 0;
  for (int attempt = 0; attempt < 400 && exercised < 50; ++attempt) {
    const int n = rng.integer(3, 5);
    PauliTerm planted;
    const PauliSum h = planted_symmetry_hamiltonian(rng, n, planted);
    const auto gens = find_symmetries(h);
    REQUIRE(!gens.empty());
    CHECK(in_span(planted, gens));

    // small random sums occasionally have a non-abelian commutant, which
    // is not taperable; restrict to the abelian instances
    bool abelian = true;
    for (std::size_t i = 0; i < gens.size() && abelian; ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j)
        if (!gens[i].commutes_with(gens[j])) abelian = false;
    if (!abelian) continue;
    ++exercised;

    const Eigen::VectorXd full = sorted_eigenvalues(h);
    const int k = static_cast<int>(gens.size());
    double best = 1e100;
    for (int assignment = 0; assignment < (1 << k); ++assignment) {
      std::vector<int> sector;
      for (int i = 0; i < k; ++i) sector.push_back((assignment >> i) & 1 ? -1 : 1);
      const SymmetrySet sym = make_symmetry_set(h, gens, sector);
      const PauliSum reduced = taper_operator(h, sym);
      CHECK(reduced.is_hermitian());
      const Eigen::VectorXd sub = sorted_eigenvalues(reduced);
      CHECK(spectrum_sub_multiset(sub, full, 1e-10));
      best = std::min(best, sub(0));
    }
    CHECK(best == doctest::Approx(full(0)).epsilon(1e-10));
  }
  CHECK(exercised == 50);
}
