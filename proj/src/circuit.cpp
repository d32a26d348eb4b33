#include "mrem/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mrem {

namespace {

constexpr int kMaxUnitaryQubits = 10;

struct KindInfo {
  const char* name;
  int arity;
  bool takes_angle;
};

constexpr KindInfo kKinds[] = {
    {"X", 1, false}, {"H", 1, false},  {"RY", 1, true}, {"CX", 2, false}, {"CRY", 2, true},
    {"G", 2, true},  {"CG", 3, true},  {"G2", 4, true}, {"CG2", 5, true},
};

const KindInfo& info(GateKind kind) { return kKinds[static_cast<int>(kind)]; }

}  // namespace

int gate_arity(GateKind kind) { return info(kind).arity; }
bool gate_takes_angle(GateKind kind) { return info(kind).takes_angle; }
const char* gate_name(GateKind kind) { return info(kind).name; }

GateKind gate_kind_from_name(const std::string& name) {
  for (int i = 0; i < static_cast<int>(std::size(kKinds)); ++i)
    if (name == kKinds[i].name) return static_cast<GateKind>(i);
  throw ParseError("unknown gate kind '" + name + "'");
}

double GateOp::bound_value() const {
  if (!angle) throw ContractError("gate has no angle");
  if (angle->symbolic) throw ContractError("unbound symbolic angle");
  return angle->value;
}

void GateOp::validate(int n_qubits) const {
  const auto& ki = info(kind);
  if (static_cast<int>(qubits.size()) != ki.arity)
    throw DimensionError(std::string(ki.name) + " expects " + std::to_string(ki.arity) +
                         " qubits");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= n_qubits)
      throw DimensionError("qubit index outside register");
    for (std::size_t j = i + 1; j < qubits.size(); ++j)
      if (qubits[i] == qubits[j]) throw DimensionError("repeated qubit index");
  }
  if (ki.takes_angle && !angle) throw ContractError(std::string(ki.name) + " needs an angle");
  if (!ki.takes_angle && angle) throw ContractError(std::string(ki.name) + " takes no angle");
}

GateOp make_gate(GateKind kind, std::vector<int> qubits) {
  return GateOp{kind, std::move(qubits), std::nullopt};
}

GateOp make_gate(GateKind kind, std::vector<int> qubits, Angle angle) {
  return GateOp{kind, std::move(qubits), angle};
}

void Circuit::append(GateOp op) {
  op.validate(n_qubits);
  if (op.angle && op.angle->symbolic) n_params = std::max(n_params, op.angle->slot + 1);
  ops.push_back(std::move(op));
}

bool Circuit::fully_bound() const {
  return std::all_of(ops.begin(), ops.end(), [](const GateOp& op) { return op.bound(); });
}

Circuit Circuit::bind(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != n_params)
    throw ContractError("parameter vector length mismatch");
  Circuit out(n_qubits);
  for (const auto& op : ops) {
    GateOp bound_op = op;
    if (op.angle && op.angle->symbolic)
      bound_op.angle = Angle::bound(op.angle->mult * theta[static_cast<std::size_t>(op.angle->slot)]);
    out.ops.push_back(std::move(bound_op));
  }
  return out;
}

void Circuit::validate() const {
  if (n_qubits <= 0) throw DimensionError("empty register");
  for (const auto& op : ops) {
    op.validate(n_qubits);
    if (op.angle && op.angle->symbolic && op.angle->slot >= n_params)
      throw ContractError("symbolic slot outside parameter range");
  }
}

namespace {

Eigen::MatrixXcd ry_matrix(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::MatrixXcd m(2, 2);
  m << c, -s, s, c;
  return m;
}

Eigen::MatrixXcd givens_matrix(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
  m(1, 1) = c;
  m(1, 2) = -s;
  m(2, 1) = s;
  m(2, 2) = c;
  return m;
}

Eigen::MatrixXcd givens2_matrix(double theta) {
  // Rotates the |0011>, |1100> plane (local indices 3 and 12).
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(16, 16);
  m(3, 3) = c;
  m(3, 12) = -s;
  m(12, 3) = s;
  m(12, 12) = c;
  return m;
}

Eigen::MatrixXcd controlled(const Eigen::MatrixXcd& u) {
  const Eigen::Index d = u.rows();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2 * d, 2 * d);
  m.block(d, d, d, d) = u;
  return m;
}

}  // namespace

Eigen::MatrixXcd gate_unitary(const GateOp& op) {
  switch (op.kind) {
    case GateKind::X: {
      Eigen::MatrixXcd m(2, 2);
      m << 0, 1, 1, 0;
      return m;
    }
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      Eigen::MatrixXcd m(2, 2);
      m << r, r, r, -r;
      return m;
    }
    case GateKind::RY:
      return ry_matrix(op.bound_value());
    case GateKind::CX: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
      m(0, 0) = m(1, 1) = 1;
      m(3, 2) = m(2, 3) = 1;
      return m;
    }
    case GateKind::CRY:
      return controlled(ry_matrix(op.bound_value()));
    case GateKind::G:
      return givens_matrix(op.bound_value());
    case GateKind::CG:
      return controlled(givens_matrix(op.bound_value()));
    case GateKind::G2:
      return givens2_matrix(op.bound_value());
    case GateKind::CG2:
      return controlled(givens2_matrix(op.bound_value()));
  }
  throw InternalError("unhandled gate kind");
}

namespace {

Angle scaled_angle(const GateOp& op, double factor) {
  const Angle& a = *op.angle;
  return a.symbolic ? Angle::param(a.slot, a.mult * factor) : Angle::bound(a.value * factor);
}

// G on [a, b] as an H/CX sandwich around two RY(theta/2) rotations; the
// conjugating layer is its own inverse so only the rotations carry theta.
void emit_givens(Circuit& c, int a, int b, const Angle& half, int control) {
  const bool ctl = control >= 0;
  auto rot = [&](int q) {
    if (ctl)
      c.append(make_gate(GateKind::CRY, {control, q}, half));
    else
      c.append(make_gate(GateKind::RY, {q}, half));
  };
  c.append(make_gate(GateKind::H, {b}));
  c.append(make_gate(GateKind::CX, {b, a}));
  rot(a);
  rot(b);
  c.append(make_gate(GateKind::CX, {b, a}));
  c.append(make_gate(GateKind::H, {b}));
}

// 14-CNOT double-excitation circuit; wires listed most-significant first.
// The CX/H skeleton composes to the identity, so the controlled variant
// only needs controls on the eight RY rotations.
void emit_givens2(Circuit& c, int a, int b, int d, int e, const Angle& eighth,
                  const Angle& eighth_neg, int control) {
  auto rot = [&](int q, const Angle& ang) {
    if (control >= 0)
      c.append(make_gate(GateKind::CRY, {control, q}, ang));
    else
      c.append(make_gate(GateKind::RY, {q}, ang));
  };
  auto cx = [&](int ctl, int tgt) { c.append(make_gate(GateKind::CX, {ctl, tgt})); };
  auto h = [&](int q) { c.append(make_gate(GateKind::H, {q})); };

  cx(b, a);
  cx(e, b);
  h(e);
  h(a);
  cx(e, d);
  cx(b, a);
  rot(e, eighth_neg);
  rot(d, eighth);
  cx(e, a);
  h(a);
  cx(a, d);
  rot(e, eighth_neg);
  rot(d, eighth);
  cx(b, d);
  cx(b, e);
  rot(e, eighth);
  rot(d, eighth_neg);
  cx(a, d);
  h(a);
  cx(e, a);
  rot(e, eighth);
  rot(d, eighth_neg);
  cx(e, d);
  cx(b, e);
  h(e);
  h(a);
  cx(e, b);
  cx(b, a);
}

}  // namespace

Circuit decompose(const GateOp& op) {
  int width = 0;
  for (int q : op.qubits) width = std::max(width, q + 1);
  Circuit c(width);
  switch (op.kind) {
    case GateKind::G:
      emit_givens(c, op.qubits[0], op.qubits[1], scaled_angle(op, 0.5), -1);
      break;
    case GateKind::CG:
      emit_givens(c, op.qubits[1], op.qubits[2], scaled_angle(op, 0.5), op.qubits[0]);
      break;
    case GateKind::G2:
      emit_givens2(c, op.qubits[0], op.qubits[1], op.qubits[2], op.qubits[3],
                   scaled_angle(op, -0.125), scaled_angle(op, 0.125), -1);
      break;
    case GateKind::CG2:
      emit_givens2(c, op.qubits[1], op.qubits[2], op.qubits[3], op.qubits[4],
                   scaled_angle(op, -0.125), scaled_angle(op, 0.125), op.qubits[0]);
      break;
    default:
      throw ContractError("decompose expects a composite Givens gate");
  }
  return c;
}

Circuit decompose_circuit(const Circuit& circuit) {
  Circuit out(circuit.n_qubits);
  out.n_params = circuit.n_params;
  for (const auto& op : circuit.ops) {
    switch (op.kind) {
      case GateKind::G:
      case GateKind::CG:
      case GateKind::G2:
      case GateKind::CG2: {
        Circuit sub = decompose(op);
        for (auto& sub_op : sub.ops) out.ops.push_back(std::move(sub_op));
        break;
      }
      default:
        out.ops.push_back(op);
    }
  }
  return out;
}

Circuit build_ry_linear(int n_qubits, int layers) {
  if (n_qubits < 2) throw DimensionError("ansatz needs at least 2 qubits");
  if (layers < 1) throw ContractError("ansatz needs at least 1 layer");
  Circuit c(n_qubits);
  int slot = 0;
  auto ry_column = [&] {
    for (int q = 0; q < n_qubits; ++q)
      c.append(make_gate(GateKind::RY, {q}, Angle::param(slot++)));
  };
  for (int layer = 0; layer < layers; ++layer) {
    ry_column();
    for (int q = 0; q + 1 < n_qubits; ++q) c.append(make_gate(GateKind::CX, {q, q + 1}));
  }
  ry_column();
  return c;
}

Circuit compose_init_after_ansatz(const Circuit& ansatz, const Circuit& init) {
  if (ansatz.n_qubits != init.n_qubits) throw DimensionError("circuit width mismatch");
  if (!init.fully_bound()) throw ContractError("init circuit must be bound");
  Circuit out = ansatz;
  for (const auto& op : init.ops) out.ops.push_back(op);
  return out;
}

ResourceCount count_resources(const Circuit& circuit, bool decompose_composites) {
  ResourceCount rc;
  for (const auto& op : circuit.ops) {
    switch (op.kind) {
      case GateKind::G:
      case GateKind::CG:
      case GateKind::G2:
      case GateKind::CG2:
        if (decompose_composites) {
          const ResourceCount sub = count_resources(decompose(op), true);
          rc.n1 += sub.n1;
          rc.n2 += sub.n2;
        } else if (gate_arity(op.kind) == 2) {
          rc.n2 += 1;
        }
        break;
      case GateKind::CRY:
        if (decompose_composites) {
          rc.n1 += 2;  // two-CX controlled-rotation identity
          rc.n2 += 2;
        } else {
          rc.n2 += 1;
        }
        break;
      default:
        (gate_arity(op.kind) == 1 ? rc.n1 : rc.n2) += 1;
    }
  }
  return rc;
}

Eigen::MatrixXcd embed_unitary(const Eigen::MatrixXcd& local, const std::vector<int>& qubits,
                               int n_qubits) {
  const int k = static_cast<int>(qubits.size());
  const std::int64_t dim = std::int64_t{1} << n_qubits;
  const std::int64_t ldim = std::int64_t{1} << k;
  if (local.rows() != ldim || local.cols() != ldim)
    throw DimensionError("local matrix size mismatch");

  std::uint64_t gate_mask = 0;
  for (int q : qubits) gate_mask |= std::uint64_t{1} << q;

  // Scatter a local index onto the register; first listed qubit = local MSB.
  auto scatter = [&](std::int64_t local_idx) {
    std::uint64_t bits = 0;
    for (int i = 0; i < k; ++i)
      if ((local_idx >> (k - 1 - i)) & 1) bits |= std::uint64_t{1} << qubits[static_cast<std::size_t>(i)];
    return bits;
  };

  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::int64_t rest = 0; rest < dim; ++rest) {
    if (static_cast<std::uint64_t>(rest) & gate_mask) continue;
    for (std::int64_t a = 0; a < ldim; ++a)
      for (std::int64_t b = 0; b < ldim; ++b) {
        const auto row = static_cast<Eigen::Index>(static_cast<std::uint64_t>(rest) | scatter(a));
        const auto col = static_cast<Eigen::Index>(static_cast<std::uint64_t>(rest) | scatter(b));
        full(row, col) += local(a, b);
      }
  }
  return full;
}

Eigen::MatrixXcd circuit_unitary(const Circuit& circuit) {
  if (circuit.n_qubits > kMaxUnitaryQubits)
    throw CapacityError("dense circuit unitary limited to 10 qubits");
  if (!circuit.fully_bound()) throw ContractError("circuit has unbound parameters");
  const std::int64_t dim = std::int64_t{1} << circuit.n_qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& op : circuit.ops)
    u = embed_unitary(gate_unitary(op), op.qubits, circuit.n_qubits) * u;
  return u;
}

namespace {

using nlohmann::json;

json angle_to_json(const Angle& a) {
  if (a.symbolic) return json{{"slot", a.slot}, {"mult", a.mult}};
  return json(a.value);
}

}  // namespace

Circuit circuit_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid circuit JSON: ") + e.what());
  }
  try {
    Circuit c(j.at("n_qubits").get<int>());
    for (const auto& jop : j.at("ops")) {
      GateOp op;
      op.kind = gate_kind_from_name(jop.at("kind").get<std::string>());
      op.qubits = jop.at("qubits").get<std::vector<int>>();
      if (jop.contains("angle")) op.angle = Angle::bound(jop.at("angle").get<double>());
      if (jop.contains("param")) {
        const auto& p = jop.at("param");
        op.angle = Angle::param(p.at("slot").get<int>(),
                                p.contains("mult") ? p.at("mult").get<double>() : 1.0);
      }
      c.append(std::move(op));
    }
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid circuit JSON: ") + e.what());
  }
}

std::string circuit_to_json_text(const Circuit& circuit) {
  json ops = json::array();
  for (const auto& op : circuit.ops) {
    json jop{{"kind", gate_name(op.kind)}, {"qubits", op.qubits}};
    if (op.angle) {
      if (op.angle->symbolic)
        jop["param"] = angle_to_json(*op.angle);
      else
        jop["angle"] = op.angle->value;
    }
    ops.push_back(std::move(jop));
  }
  return json{{"n_qubits", circuit.n_qubits}, {"ops", std::move(ops)}}.dump(2) + "\n";
}

Circuit read_circuit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return circuit_from_json_text(ss.str());
}

void write_circuit_file(const Circuit& circuit, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << circuit_to_json_text(circuit);
}

}  // namespace mrem
