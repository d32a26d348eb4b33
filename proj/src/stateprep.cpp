#include "mrem/stateprep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mrem {

std::uint64_t parse_bitstring(const std::string& s) {
  if (s.empty() || s.size() > 63) throw ParseError("bad bitstring '" + s + "'");
  std::uint64_t bits = 0;
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw ParseError("bad bitstring '" + s + "'");
    bits = (bits << 1) | static_cast<std::uint64_t>(ch == '1');
  }
  return bits;
}

std::string format_bitstring(std::uint64_t bits, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q)
    if ((bits >> q) & 1) s[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
  return s;
}

void MRTarget::validate_and_normalize() {
  if (n_qubits <= 0 || n_qubits > 32) throw DimensionError("bad register width");
  if (components.empty() || components.size() > 4)
    throw ContractError("targets carry 1 to 4 determinants");
  std::set<std::uint64_t> seen;
  double norm_sq = 0.0;
  bool has_reference = false;
  for (const auto& [det, coeff] : components) {
    if (det >> n_qubits) throw DimensionError("determinant outside register");
    if (!seen.insert(det).second) throw ContractError("repeated determinant");
    if (det == reference) has_reference = true;
    norm_sq += coeff * coeff;
  }
  if (!has_reference) throw ContractError("components must include the reference");
  if (std::abs(norm_sq - 1.0) > 1e-3)
    throw ContractError("target coefficients are not normalized");

  std::stable_partition(components.begin(), components.end(),
                        [&](const auto& c) { return c.first == reference; });
  const double scale = 1.0 / std::sqrt(norm_sq);
  for (auto& [det, coeff] : components) coeff *= scale;
  if (components.front().second < 0.0)
    for (auto& [det, coeff] : components) coeff = -coeff;
}

MRTarget MRTarget::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid target JSON: ") + e.what());
  }
  MRTarget t;
  try {
    t.n_qubits = j.at("n_qubits").get<int>();
    t.reference = parse_bitstring(j.at("reference").get<std::string>());
    for (const auto& jc : j.at("components"))
      t.components.emplace_back(parse_bitstring(jc.at("det").get<std::string>()),
                                jc.at("coeff").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid target JSON: ") + e.what());
  }
  t.validate_and_normalize();
  return t;
}

std::string MRTarget::to_json_text() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& [det, coeff] : components)
    comps.push_back({{"det", format_bitstring(det, n_qubits)}, {"coeff", coeff}});
  return nlohmann::json{{"n_qubits", n_qubits},
                        {"reference", format_bitstring(reference, n_qubits)},
                        {"components", std::move(comps)}}
             .dump(2) +
         "\n";
}

MRTarget read_mr_target_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return MRTarget::from_json_text(ss.str());
}

void PrepTemplate::validate() const {
  circuit.validate();
  for (const auto& op : circuit.ops)
    switch (op.kind) {
      case GateKind::X:
      case GateKind::CX:
      case GateKind::G:
      case GateKind::CG:
      case GateKind::G2:
      case GateKind::CG2:
        break;
      default:
        throw TemplateError("templates allow only {G, CG, G2, CG2, CX, X}");
    }
}

PrepTemplate read_template_file(const std::string& path) {
  PrepTemplate t{read_circuit_file(path)};
  t.validate();
  return t;
}

Circuit prepare_circuit(const MRTarget& target, const PrepTemplate& tmpl,
                        std::span<const double> angles) {
  if (tmpl.circuit.n_qubits != target.n_qubits)
    throw DimensionError("template/target width mismatch");
  Circuit out(target.n_qubits);
  for (int q = 0; q < target.n_qubits; ++q)
    if ((target.reference >> q) & 1) out.append(make_gate(GateKind::X, {q}));
  const Circuit bound = tmpl.circuit.bind(angles);
  for (const auto& op : bound.ops) out.append(op);
  return out;
}

namespace {

// Reachable basis-state support of the template applied to the reference.
std::set<std::uint64_t> propagate_support(const MRTarget& target, const PrepTemplate& tmpl) {
  std::set<std::uint64_t> support{target.reference};
  auto bit = [](int q) { return std::uint64_t{1} << q; };
  for (const auto& op : tmpl.circuit.ops) {
    std::set<std::uint64_t> next;
    for (std::uint64_t s : support) {
      switch (op.kind) {
        case GateKind::X:
          next.insert(s ^ bit(op.qubits[0]));
          break;
        case GateKind::CX:
          next.insert((s & bit(op.qubits[0])) ? s ^ bit(op.qubits[1]) : s);
          break;
        case GateKind::G:
        case GateKind::CG: {
          const bool active = op.kind == GateKind::G || (s & bit(op.qubits[0]));
          const int a = op.qubits[op.kind == GateKind::G ? 0 : 1];
          const int b = op.qubits[op.kind == GateKind::G ? 1 : 2];
          next.insert(s);
          const bool na = s & bit(a), nb = s & bit(b);
          if (active && na != nb) next.insert(s ^ bit(a) ^ bit(b));
          break;
        }
        case GateKind::G2:
        case GateKind::CG2: {
          const int base = op.kind == GateKind::G2 ? 0 : 1;
          const bool active = op.kind == GateKind::G2 || (s & bit(op.qubits[0]));
          const int a = op.qubits[base], b = op.qubits[base + 1], c = op.qubits[base + 2],
                    d = op.qubits[base + 3];
          next.insert(s);
          const int local = (static_cast<int>((s >> a) & 1) << 3) |
                            (static_cast<int>((s >> b) & 1) << 2) |
                            (static_cast<int>((s >> c) & 1) << 1) |
                            static_cast<int>((s >> d) & 1);
          if (active && (local == 0b0011 || local == 0b1100))
            next.insert(s ^ bit(a) ^ bit(b) ^ bit(c) ^ bit(d));
          break;
        }
        default:
          next.insert(s);
      }
    }
    support = std::move(next);
  }
  return support;
}

Eigen::VectorXd component_amplitudes(const MRTarget& target, const PrepTemplate& tmpl,
                                     const std::vector<double>& angles) {
  const Circuit c = prepare_circuit(target, tmpl, angles);
  const QuantumState s = run_pure(c, 0);
  Eigen::VectorXd amps(static_cast<Eigen::Index>(target.components.size()));
  for (std::size_t i = 0; i < target.components.size(); ++i) {
    const Complex a = s.vec(static_cast<Eigen::Index>(target.components[i].first));
    if (std::abs(a.imag()) > 1e-12)
      throw InternalError("preparation produced complex amplitudes");
    amps(static_cast<Eigen::Index>(i)) = a.real();
  }
  return amps;
}

Eigen::VectorXd residual(const MRTarget& target, const PrepTemplate& tmpl,
                         const std::vector<double>& angles) {
  Eigen::VectorXd r = component_amplitudes(target, tmpl, angles);
  for (std::size_t i = 0; i < target.components.size(); ++i)
    r(static_cast<Eigen::Index>(i)) -= target.components[i].second;
  return r;
}

// Exact derivative of the amplitude map via the parameter-shift rule:
// every template rotation is a theta/2-type rotation, so dU/dphi equals
// (U(phi + pi) - U(phi - pi)) / 4; slot multipliers chain through.
Eigen::MatrixXd amplitude_jacobian(const MRTarget& target, const PrepTemplate& tmpl,
                                   const std::vector<double>& angles) {
  const int k = tmpl.slot_count();
  const auto m = static_cast<Eigen::Index>(target.components.size());
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, k);

  for (std::size_t op_idx = 0; op_idx < tmpl.circuit.ops.size(); ++op_idx) {
    const auto& op = tmpl.circuit.ops[op_idx];
    if (!op.angle || !op.angle->symbolic) continue;
    const int slot = op.angle->slot;
    const double mult = op.angle->mult;

    auto shifted = [&](double shift) {
      PrepTemplate local = tmpl;
      auto& ang = local.circuit.ops[op_idx].angle;
      const double base = mult * angles[static_cast<std::size_t>(slot)];
      ang = Angle::bound(base + shift);
      return component_amplitudes(target, local, angles);
    };
    const Eigen::VectorXd plus = shifted(M_PI);
    const Eigen::VectorXd minus = shifted(-M_PI);
    jac.col(slot) += mult * (plus - minus) / 4.0;
  }
  return jac;
}

// Closed-form cascade: each slot at pi sends the reference onto a single
// excited determinant, so angles follow from nested arcsines.
std::vector<double> solve_cascade(const MRTarget& target, const PrepTemplate& tmpl) {
  const int k = tmpl.slot_count();
  std::vector<double> angles(static_cast<std::size_t>(k), 0.0);

  std::vector<int> order;  // slots by first appearance
  for (const auto& op : tmpl.circuit.ops)
    if (op.angle && op.angle->symbolic &&
        std::find(order.begin(), order.end(), op.angle->slot) == order.end())
      order.push_back(op.angle->slot);
  if (static_cast<int>(order.size()) != k) throw SolverError("cascade fallback inapplicable");

  auto coeff_of = [&](std::uint64_t det) {
    for (const auto& [d, c] : target.components)
      if (d == det) return c;
    throw SolverError("cascade reached a determinant outside the target");
  };

  double cos_product = 1.0;
  for (int slot : order) {
    std::vector<double> probe(static_cast<std::size_t>(k), 0.0);
    probe[static_cast<std::size_t>(slot)] = M_PI;
    const Circuit c = prepare_circuit(target, tmpl, probe);
    const QuantumState s = run_pure(c, 0);
    std::uint64_t hit = 0;
    int hits = 0;
    for (Eigen::Index i = 0; i < s.vec.size(); ++i)
      if (std::abs(s.vec(i)) > 1e-9) {
        hit = static_cast<std::uint64_t>(i);
        ++hits;
      }
    if (hits != 1 || hit == target.reference)
      throw SolverError("cascade fallback inapplicable");
    const double want = coeff_of(hit) / cos_product;
    if (std::abs(want) > 1.0) throw SolverError("cascade coefficient out of range");
    angles[static_cast<std::size_t>(slot)] = 2.0 * std::asin(want);
    cos_product *= std::cos(angles[static_cast<std::size_t>(slot)] / 2.0);
    if (std::abs(cos_product) < 1e-12) break;
  }
  return angles;
}

}  // namespace

std::vector<double> solve_parameters(const MRTarget& target, const PrepTemplate& tmpl) {
  tmpl.validate();
  if (tmpl.circuit.n_qubits != target.n_qubits)
    throw DimensionError("template/target width mismatch");
  const int k = tmpl.slot_count();
  if (k > static_cast<int>(target.components.size()) - 1)
    throw ContractError("template has more slots than excited determinants");

  const auto support = propagate_support(target, tmpl);
  for (const auto& [det, coeff] : target.components)
    if (!support.count(det))
      throw TemplateError("template cannot reach determinant " +
                          format_bitstring(det, target.n_qubits));

  if (k == 0) return {};

  std::vector<double> angles(static_cast<std::size_t>(k), 0.0);
  Eigen::VectorXd r = residual(target, tmpl, angles);
  constexpr double kTol = 1e-10;
  constexpr int kMaxIter = 200;

  for (int iter = 0; iter < kMaxIter; ++iter) {
    if (r.cwiseAbs().maxCoeff() < kTol) return angles;
    const Eigen::MatrixXd jac = amplitude_jacobian(target, tmpl, angles);
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) break;

    double damping = 1.0;
    bool improved = false;
    for (int half = 0; half < 8; ++half, damping *= 0.5) {
      std::vector<double> trial = angles;
      for (int j = 0; j < k; ++j) trial[static_cast<std::size_t>(j)] += damping * step(j);
      const Eigen::VectorXd rt = residual(target, tmpl, trial);
      if (rt.norm() < r.norm()) {
        angles = std::move(trial);
        r = rt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (r.cwiseAbs().maxCoeff() < kTol) return angles;

  // Newton stalled; try the closed-form cascade before giving up.
  try {
    std::vector<double> cascade = solve_cascade(target, tmpl);
    if (residual(target, tmpl, cascade).cwiseAbs().maxCoeff() < 1e-8) return cascade;
  } catch (const SolverError&) {
  }
  std::ostringstream msg;
  msg << "angle solve did not converge; residual " << r.cwiseAbs().maxCoeff();
  throw SolverError(msg.str());
}

std::pair<Circuit, std::vector<double>> compile_state(const MRTarget& target,
                                                      const PrepTemplate& tmpl) {
  MRTarget t = target;
  t.validate_and_normalize();
  std::vector<double> angles = solve_parameters(t, tmpl);
  Circuit circuit = prepare_circuit(t, tmpl, angles);

  const PrepReport report = verify_preparation(circuit, t);
  if (report.max_amplitude_error > 1e-8 || report.support_leakage > 1e-8)
    throw SolverError("compiled state misses the target (max amplitude error " +
                      std::to_string(report.max_amplitude_error) + ", leakage " +
                      std::to_string(report.support_leakage) + ")");
  return {std::move(circuit), std::move(angles)};
}

PrepReport verify_preparation(const Circuit& bound, const MRTarget& target) {
  PrepReport report;
  const QuantumState s = run_pure(bound, 0);

  double support_prob = 0.0;
  for (const auto& [det, coeff] : target.components) {
    const Complex a = s.vec(static_cast<Eigen::Index>(det));
    report.amplitude_errors.push_back(std::abs(a - Complex{coeff, 0.0}));
    support_prob += std::norm(a);
  }
  report.max_amplitude_error =
      *std::max_element(report.amplitude_errors.begin(), report.amplitude_errors.end());
  report.support_leakage = std::max(0.0, 1.0 - support_prob);

  const int weight = std::popcount(target.components.front().first);
  report.weight_check_applicable = true;
  for (const auto& [det, coeff] : target.components)
    if (std::popcount(det) != weight) report.weight_check_applicable = false;
  if (report.weight_check_applicable) {
    report.weights_uniform = true;
    report.note = "support shares Hamming weight " + std::to_string(weight);
  } else {
    report.note =
        "support mixes Hamming weights (tapered register); particle-number check skipped";
  }
  return report;
}

}  // namespace mrem
