#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mrem/circuit.hpp"
#include "mrem/sim.hpp"
#include "support/oracles.hpp"

using namespace mrem;

namespace {

long count_kind(const Circuit& c, GateKind kind) {
  long n = 0;
  for (const auto& op : c.ops)
    if (op.kind == kind) ++n;
  return n;
}

Eigen::MatrixXcd number_matrix(int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    m(i, i) = static_cast<double>(std::popcount(static_cast<std::uint64_t>(i)));
  return m;
}

}  // namespace

TEST_CASE("givens rotation mixes |01> and |10>") {
  const GateOp g0 = make_gate(GateKind::G, {1, 0}, Angle::bound(0.0));
  CHECK(oracle::max_abs_diff(gate_unitary(g0), Eigen::MatrixXcd::Identity(4, 4)) < 1e-15);

  const double theta = 0.7;
  const GateOp g = make_gate(GateKind::G, {1, 0}, Angle::bound(theta));
  const Eigen::MatrixXcd u = gate_unitary(g);
  CHECK(u(1, 1).real() == doctest::Approx(std::cos(theta / 2)));
  CHECK(u(2, 1).real() == doctest::Approx(std::sin(theta / 2)));
  CHECK(u(1, 2).real() == doctest::Approx(-std::sin(theta / 2)));
  CHECK(u(0, 0) == Complex{1, 0});
  CHECK(u(3, 3) == Complex{1, 0});
}

TEST_CASE("double-excitation rotation acts on the |0011>, |1100> plane") {
  const double theta = 0.7;
  const GateOp g2 = make_gate(GateKind::G2, {3, 2, 1, 0}, Angle::bound(theta));
  const Eigen::MatrixXcd u = gate_unitary(g2);
  // column of |0011> (local index 3)
  CHECK(u(3, 3).real() == doctest::Approx(std::cos(theta / 2)));
  CHECK(u(12, 3).real() == doctest::Approx(std::sin(theta / 2)));
  CHECK(u(3, 12).real() == doctest::Approx(-std::sin(theta / 2)));
  for (int i = 0; i < 16; ++i)
    if (i != 3 && i != 12) CHECK(u(i, i) == Complex{1, 0});
}

TEST_CASE("controlled rotations act only on the |1> control branch") {
  oracle::Rng rng(91);
  for (int trial = 0; trial < 20; ++trial) {
    const double theta = rng.uniform(-3, 3);
    const GateOp cg = make_gate(GateKind::CG, {2, 1, 0}, Angle::bound(theta));
    const Eigen::MatrixXcd u = gate_unitary(cg);
    // |0ab> untouched
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        CHECK(std::abs(u(a, b) - (a == b ? 1.0 : 0.0)) < 1e-15);
    // |1ab> behaves as G
    const Eigen::MatrixXcd g =
        gate_unitary(make_gate(GateKind::G, {1, 0}, Angle::bound(theta)));
    CHECK(oracle::max_abs_diff(u.block(4, 4, 4, 4), g) < 1e-15);
  }
}

TEST_CASE("every gate matrix is unitary") {
  oracle::Rng rng(92);
  for (int trial = 0; trial < 25; ++trial) {
    const double theta = rng.uniform(-3, 3);
    const std::vector<GateOp> ops = {
        make_gate(GateKind::X, {0}),
        make_gate(GateKind::H, {0}),
        make_gate(GateKind::RY, {0}, Angle::bound(theta)),
        make_gate(GateKind::CX, {1, 0}),
        make_gate(GateKind::CRY, {1, 0}, Angle::bound(theta)),
        make_gate(GateKind::G, {1, 0}, Angle::bound(theta)),
        make_gate(GateKind::CG, {2, 1, 0}, Angle::bound(theta)),
        make_gate(GateKind::G2, {3, 2, 1, 0}, Angle::bound(theta)),
        make_gate(GateKind::CG2, {4, 3, 2, 1, 0}, Angle::bound(theta)),
    };
    for (const auto& op : ops) {
      const Eigen::MatrixXcd u = gate_unitary(op);
      CHECK(oracle::max_abs_diff(u.adjoint() * u,
                                 Eigen::MatrixXcd::Identity(u.rows(), u.cols())) < 1e-12);
    }
  }
}

TEST_CASE("decompositions use the documented CNOT budgets") {
  const GateOp g = make_gate(GateKind::G, {1, 0}, Angle::bound(0.3));
  CHECK(count_kind(decompose(g), GateKind::CX) == 2);
  const GateOp g2 = make_gate(GateKind::G2, {3, 2, 1, 0}, Angle::bound(0.3));
  CHECK(count_kind(decompose(g2), GateKind::CX) == 14);
}

TEST_CASE("decompositions reproduce the direct unitaries") {
  oracle::Rng rng(93);
  struct Case {
    GateKind kind;
    std::vector<int> qubits;
    int width;
  };
  const std::vector<Case> cases = {
      {GateKind::G, {1, 0}, 2},
      {GateKind::CG, {2, 1, 0}, 3},
      {GateKind::G2, {3, 2, 1, 0}, 4},
      {GateKind::CG2, {4, 3, 2, 1, 0}, 5},
      // scrambled qubit placements
      {GateKind::G, {0, 2}, 3},
      {GateKind::CG, {0, 2, 1}, 3},
      {GateKind::G2, {1, 3, 0, 2}, 4},
      {GateKind::CG2, {2, 0, 4, 1, 3}, 5},
  };
  for (const auto& c : cases) {
    for (int trial = 0; trial < 50; ++trial) {
      const double theta = rng.uniform(-3.1, 3.1);
      const GateOp op = make_gate(c.kind, c.qubits, Angle::bound(theta));
      Circuit direct(c.width);
      direct.append(op);
      const Eigen::MatrixXcd want = circuit_unitary(direct);
      Circuit dec = decompose(op);
      dec.n_qubits = c.width;
      const Eigen::MatrixXcd got = circuit_unitary(dec);
      CHECK(oracle::phase_free_diff(want, got) < 1e-10);
    }
  }
}

TEST_CASE("symbolic decomposition keeps exact angle ratios") {
  const GateOp g2 = make_gate(GateKind::G2, {3, 2, 1, 0}, Angle::param(0));
  const Circuit dec = decompose(g2);
  int symbolic = 0;
  for (const auto& op : dec.ops)
    if (op.angle && op.angle->symbolic) {
      ++symbolic;
      CHECK(std::abs(op.angle->mult) == doctest::Approx(0.125));
    }
  CHECK(symbolic == 8);
  // binding the decomposition equals decomposing the bound gate
  const double theta = -1.234;
  const std::vector<double> params{theta};
  const Eigen::MatrixXcd a = circuit_unitary(dec.bind(params));
  const Eigen::MatrixXcd b =
      circuit_unitary(decompose(make_gate(GateKind::G2, {3, 2, 1, 0}, Angle::bound(theta))));
  CHECK(oracle::max_abs_diff(a, b) < 1e-14);
}

TEST_CASE("givens rotations conserve particle number") {
  for (double theta : {0.4, -1.9, 2.3}) {
    const Eigen::MatrixXcd g = gate_unitary(make_gate(GateKind::G, {1, 0}, Angle::bound(theta)));
    const Eigen::MatrixXcd n2 = number_matrix(2);
    CHECK(oracle::max_abs_diff(g * n2, n2 * g) < 1e-10);

    const GateOp g2op = make_gate(GateKind::G2, {3, 2, 1, 0}, Angle::bound(theta));
    const Eigen::MatrixXcd g2 = gate_unitary(g2op);
    const Eigen::MatrixXcd n4 = number_matrix(4);
    CHECK(oracle::max_abs_diff(g2 * n4, n4 * g2) < 1e-10);

    // the decomposition preserves the commutation as a whole
    Circuit dec = decompose(g2op);
    const Eigen::MatrixXcd u = circuit_unitary(dec);
    CHECK(oracle::max_abs_diff(u * n4, n4 * u) < 1e-10);
  }
}

TEST_CASE("hardware-efficient ansatz resource counts") {
  struct Row {
    int qubits, layers;
    long n1, n2;
  };
  for (const Row row : {Row{5, 5, 30, 20}, Row{8, 5, 48, 35}, Row{8, 20, 168, 140}}) {
    const Circuit c = build_ry_linear(row.qubits, row.layers);
    CHECK(c.n_params == (row.layers + 1) * row.qubits);
    const ResourceCount rc = count_resources(c, false);
    CHECK(rc.n1 == row.n1);
    CHECK(rc.n2 == row.n2);
  }
}

TEST_CASE("zero-parameter ansatz fixes the vacuum") {
  const Circuit c = build_ry_linear(4, 3);
  const std::vector<double> zeros(static_cast<std::size_t>(c.n_params), 0.0);
  const QuantumState s = run_pure(c.bind(zeros), 0);
  CHECK(std::abs(s.vec(0) - Complex{1, 0}) == 0.0);
}

TEST_CASE("composition applies the ansatz before the preparation") {
  Circuit init(3);
  init.append(make_gate(GateKind::X, {0}));
  const Circuit ansatz = build_ry_linear(3, 1);
  const Circuit composed = compose_init_after_ansatz(ansatz, init);
  CHECK(composed.n_params == ansatz.n_params);
  const std::vector<double> zeros(static_cast<std::size_t>(ansatz.n_params), 0.0);
  const QuantumState s = run_pure(composed.bind(zeros), 0);
  CHECK(std::abs(s.vec(1)) == doctest::Approx(1.0));

  // empty preparation leaves the ansatz alone
  const Circuit alone = compose_init_after_ansatz(ansatz, Circuit(3));
  CHECK(alone.ops.size() == ansatz.ops.size());

  // dense product identity on a bound pair
  oracle::Rng rng(94);
  std::vector<double> theta(static_cast<std::size_t>(ansatz.n_params));
  for (auto& t : theta) t = rng.uniform(-1, 1);
  Circuit init2(3);
  init2.append(make_gate(GateKind::X, {1}));
  init2.append(make_gate(GateKind::G, {2, 0}, Angle::bound(0.8)));
  const Eigen::MatrixXcd u_total =
      circuit_unitary(compose_init_after_ansatz(ansatz, init2).bind(theta));
  const Eigen::MatrixXcd u_product =
      circuit_unitary(init2) * circuit_unitary(ansatz.bind(theta));
  CHECK(oracle::max_abs_diff(u_total, u_product) < 1e-12);
}

TEST_CASE("resource counting is additive and decomposition-aware") {
  CHECK(count_resources(Circuit(2), true).n1 == 0);
  CHECK(count_resources(Circuit(2), true).n2 == 0);

  // the tapered three-determinant preparation: X, two G, three CX
  Circuit prep(5);
  prep.append(make_gate(GateKind::X, {0}));
  prep.append(make_gate(GateKind::G, {1, 0}, Angle::bound(-0.15)));
  prep.append(make_gate(GateKind::CX, {1, 2}));
  prep.append(make_gate(GateKind::G, {3, 0}, Angle::bound(-0.18)));
  prep.append(make_gate(GateKind::CX, {3, 4}));
  prep.append(make_gate(GateKind::CX, {3, 0}));
  const ResourceCount rc = count_resources(prep, true);
  CHECK(rc.n1 == 9);
  CHECK(rc.n2 == 7);

  oracle::Rng rng(95);
  for (int trial = 0; trial < 100; ++trial) {
    Circuit a(4), b(4);
    auto add_random = [&](Circuit& c) {
      const int n_ops = rng.integer(0, 6);
      for (int i = 0; i < n_ops; ++i) {
        switch (rng.integer(0, 3)) {
          case 0:
            c.append(make_gate(GateKind::H, {rng.integer(0, 3)}));
            break;
          case 1:
            c.append(make_gate(GateKind::RY, {rng.integer(0, 3)}, Angle::bound(0.1)));
            break;
          case 2: {
            const int q = rng.integer(0, 2);
            c.append(make_gate(GateKind::CX, {q, q + 1}));
            break;
          }
          default: {
            const int q = rng.integer(0, 2);
            c.append(make_gate(GateKind::G, {q + 1, q}, Angle::bound(0.2)));
            break;
          }
        }
      }
    };
    add_random(a);
    add_random(b);
    Circuit ab = a;
    for (const auto& op : b.ops) ab.ops.push_back(op);
    for (bool flag : {false, true}) {
      const ResourceCount ra = count_resources(a, flag);
      const ResourceCount rb = count_resources(b, flag);
      const ResourceCount rab = count_resources(ab, flag);
      CHECK(rab.n1 == ra.n1 + rb.n1);
      CHECK(rab.n2 == ra.n2 + rb.n2);
    }
  }
}

TEST_CASE("circuit JSON round-trips") {
  Circuit c(5);
  c.append(make_gate(GateKind::X, {0}));
  c.append(make_gate(GateKind::G, {1, 0}, Angle::param(0)));
  c.append(make_gate(GateKind::CX, {1, 2}));
  c.append(make_gate(GateKind::G2, {4, 3, 2, 1}, Angle::param(1, 1.0)));
  c.append(make_gate(GateKind::CRY, {0, 4}, Angle::bound(0.25)));
  const Circuit back = circuit_from_json_text(circuit_to_json_text(c));
  CHECK(back.n_qubits == c.n_qubits);
  CHECK(back.n_params == c.n_params);
  REQUIRE(back.ops.size() == c.ops.size());
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    CHECK(back.ops[i].kind == c.ops[i].kind);
    CHECK(back.ops[i].qubits == c.ops[i].qubits);
  }
}

TEST_CASE("binding and validation reject misuse") {
  Circuit c(2);
  c.append(make_gate(GateKind::RY, {0}, Angle::param(0)));
  CHECK_THROWS_AS((void)c.bind(std::vector<double>{0.1, 0.2}), ContractError);
  CHECK_THROWS_AS(gate_unitary(c.ops[0]), ContractError);
  CHECK_THROWS_AS(decompose(make_gate(GateKind::H, {0})), ContractError);
  Circuit bad(2);
  CHECK_THROWS_AS(bad.append(make_gate(GateKind::CX, {0, 0})), DimensionError);
  CHECK_THROWS_AS(bad.append(make_gate(GateKind::CX, {0, 2})), DimensionError);
  CHECK_THROWS_AS(build_ry_linear(1, 1), DimensionError);
  CHECK_THROWS_AS(build_ry_linear(3, 0), ContractError);
}
