#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mrem/errors.hpp"

namespace mrem {

/// Gate set. G is the two-qubit Givens rotation mixing |01> and |10>;
/// G2 its four-qubit double-excitation analogue mixing |0011> and |1100>;
/// CG/CG2 their singly-controlled versions.
enum class GateKind { X, H, RY, CX, CRY, G, CG, G2, CG2 };

int gate_arity(GateKind kind);
bool gate_takes_angle(GateKind kind);
const char* gate_name(GateKind kind);
GateKind gate_kind_from_name(const std::string& name);

/// A rotation angle, either bound to a value or a symbolic slot reference
/// scaled by a rational multiplier (so decompositions keep exact theta/2,
/// theta/8 relations until binding).
struct Angle {
  bool symbolic = false;
  double value = 0.0;  // bound value
  int slot = 0;        // parameter slot when symbolic
  double mult = 1.0;   // bound angle = mult * theta[slot]

  static Angle bound(double v) { return Angle{false, v, 0, 1.0}; }
  static Angle param(int slot, double mult = 1.0) { return Angle{true, 0.0, slot, mult}; }
};

/// One gate application. Qubit order: controls first; for multi-target
/// Givens gates the targets follow the subscript order of the matrix
/// definition, first listed = most significant bit of the local basis index.
struct GateOp {
  GateKind kind = GateKind::X;
  std::vector<int> qubits;
  std::optional<Angle> angle;

  bool bound() const { return !angle || !angle->symbolic; }
  double bound_value() const;
  void validate(int n_qubits) const;
};

GateOp make_gate(GateKind kind, std::vector<int> qubits);
GateOp make_gate(GateKind kind, std::vector<int> qubits, Angle angle);

/// An ordered gate list over a fixed register width with symbolic slots.
struct Circuit {
  int n_qubits = 0;
  std::vector<GateOp> ops;
  int n_params = 0;

  Circuit() = default;
  explicit Circuit(int n) : n_qubits(n) {}

  void append(GateOp op);
  bool fully_bound() const;

  /// Substitutes theta into every symbolic slot; result has n_params = 0.
  Circuit bind(std::span<const double> theta) const;

  void validate() const;
};

/// Exact unitary of a bound gate on its local 2^k-dimensional space.
/// Local index: first listed qubit is the most significant bit.
Eigen::MatrixXcd gate_unitary(const GateOp& op);

/// Decomposition of G/CG/G2/CG2 into {X, H, RY, CX, CRY}; exact (the
/// composite unitary is reproduced without any global phase). Symbolic
/// angles survive with scaled multipliers. G costs 2 CNOTs, G2 costs 14.
Circuit decompose(const GateOp& op);

/// Maps decompose over composite ops, copying everything else.
Circuit decompose_circuit(const Circuit& circuit);

/// Hardware-efficient R_Y-linear ansatz: (layers + 1) full RY columns
/// interleaved with `layers` nearest-neighbour CNOT chains (control = lower
/// index). n_params = (layers + 1) * n_qubits; all-zero parameters act as
/// the identity on |0...0>.
Circuit build_ry_linear(int n_qubits, int layers);

/// Concatenation applying `ansatz` first, then `init`; init must be bound.
Circuit compose_init_after_ansatz(const Circuit& ansatz, const Circuit& init);

struct ResourceCount {
  long n1 = 0;  // single-qubit gates
  long n2 = 0;  // two-qubit gates
};

/// Gate counts. With decompose_composites set, G/CG/G2/CG2 are counted via
/// their decompositions and CRY as 2 CX + 2 RY (the documented convention);
/// otherwise gates are counted by raw arity (wider composites uncounted).
ResourceCount count_resources(const Circuit& circuit, bool decompose_composites);

/// Full 2^n x 2^n unitary of a bound circuit (dense oracle; n <= 10).
Eigen::MatrixXcd circuit_unitary(const Circuit& circuit);

/// Embeds a local gate matrix into the full register space.
Eigen::MatrixXcd embed_unitary(const Eigen::MatrixXcd& local, const std::vector<int>& qubits,
                               int n_qubits);

/// JSON circuit format: {"n_qubits": N, "ops": [{"kind": "G", "qubits":
/// [1,0], "angle": 0.3 | "param": {"slot": 0, "mult": 1.0}}, ...]}.
Circuit circuit_from_json_text(const std::string& text);
std::string circuit_to_json_text(const Circuit& circuit);
Circuit read_circuit_file(const std::string& path);
void write_circuit_file(const Circuit& circuit, const std::string& path);

}  // namespace mrem
