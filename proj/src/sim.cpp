#include "mrem/sim.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace mrem {

void NoiseModel::validate() const {
  if (depol_1q < 0 || depol_1q > 1 || depol_2q < 0 || depol_2q > 1)
    throw ContractError("depolarizing probabilities must lie in [0, 1]");
  if (dur_1q < 0 || dur_2q < 0) throw ContractError("gate durations must be non-negative");
  if (t1 > 0 && t2 > 0 && t2 > 2 * t1 + 1e-12)
    throw ContractError("thermal relaxation needs t2 <= 2 * t1");
}

bool NoiseModel::has_noise() const {
  const bool relaxing = (t1 > 0 || t2 > 0) && (dur_1q > 0 || dur_2q > 0);
  return depol_1q > 0 || depol_2q > 0 || relaxing;
}

void ShotModel::validate() const {
  if (shots < 1) throw ContractError("shot count must be positive");
}

NoiseModel noise_model_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid noise JSON: ") + e.what());
  }
  NoiseModel nm;
  nm.depol_1q = j.value("depol_1q", 0.0);
  nm.depol_2q = j.value("depol_2q", 0.0);
  nm.t1 = j.value("t1", 0.0);
  nm.t2 = j.value("t2", 0.0);
  nm.dur_1q = j.value("dur_1q", 0.0);
  nm.dur_2q = j.value("dur_2q", 0.0);
  nm.seed = j.value("seed", std::uint64_t{0});
  nm.validate();
  return nm;
}

ShotModel shot_model_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid shot JSON: ") + e.what());
  }
  ShotModel sm;
  sm.shots = j.value("shots", 10000000LL);
  sm.enabled = j.value("enabled", false);
  sm.validate();
  return sm;
}

namespace {

// Scatter table: local index -> register bits, first listed qubit = MSB.
std::vector<std::uint64_t> scatter_table(const std::vector<int>& qubits) {
  const int k = static_cast<int>(qubits.size());
  const std::int64_t ldim = std::int64_t{1} << k;
  std::vector<std::uint64_t> table(static_cast<std::size_t>(ldim));
  for (std::int64_t a = 0; a < ldim; ++a) {
    std::uint64_t bits = 0;
    for (int i = 0; i < k; ++i)
      if ((a >> (k - 1 - i)) & 1)
        bits |= std::uint64_t{1} << qubits[static_cast<std::size_t>(i)];
    table[static_cast<std::size_t>(a)] = bits;
  }
  return table;
}

void apply_unitary_vec(Eigen::VectorXcd& v, const Eigen::MatrixXcd& u,
                       const std::vector<int>& qubits) {
  const auto table = scatter_table(qubits);
  const std::int64_t ldim = static_cast<std::int64_t>(table.size());
  const std::int64_t dim = v.size();
  std::uint64_t gate_mask = 0;
  for (int q : qubits) gate_mask |= std::uint64_t{1} << q;

  std::vector<Complex> buf(static_cast<std::size_t>(ldim));
  for (std::int64_t rest = 0; rest < dim; ++rest) {
    if (static_cast<std::uint64_t>(rest) & gate_mask) continue;
    for (std::int64_t a = 0; a < ldim; ++a)
      buf[static_cast<std::size_t>(a)] =
          v(static_cast<Eigen::Index>(static_cast<std::uint64_t>(rest) | table[static_cast<std::size_t>(a)]));
    for (std::int64_t a = 0; a < ldim; ++a) {
      Complex acc = 0.0;
      for (std::int64_t b = 0; b < ldim; ++b) acc += u(a, b) * buf[static_cast<std::size_t>(b)];
      v(static_cast<Eigen::Index>(static_cast<std::uint64_t>(rest) | table[static_cast<std::size_t>(a)])) = acc;
    }
  }
}

// rho -> U rho U^dagger
void apply_unitary_density(Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& u,
                           const std::vector<int>& qubits) {
  const auto table = scatter_table(qubits);
  const std::int64_t ldim = static_cast<std::int64_t>(table.size());
  const std::int64_t dim = rho.rows();
  std::uint64_t gate_mask = 0;
  for (int q : qubits) gate_mask |= std::uint64_t{1} << q;

  std::vector<Complex> buf(static_cast<std::size_t>(ldim));
  // left multiply: each column transforms as a vector
  for (std::int64_t col = 0; col < dim; ++col) {
    for (std::int64_t rest = 0; rest < dim; ++rest) {
      if (static_cast<std::uint64_t>(rest) & gate_mask) continue;
      for (std::int64_t a = 0; a < ldim; ++a)
        buf[static_cast<std::size_t>(a)] = rho(
            static_cast<Eigen::Index>(static_cast<std::uint64_t>(rest) | table[static_cast<std::size_t>(a)]), col);
      for (std::int64_t a = 0; a < ldim; ++a) {
        Complex acc = 0.0;
        for (std::int64_t b = 0; b < ldim; ++b) acc += u(a, b) * buf[static_cast<std::size_t>(b)];
        rho(static_cast<Eigen::Index>(static_cast<std::uint64_t>(rest) | table[static_cast<std::size_t>(a)]), col) = acc;
      }
    }
  }
  // right multiply by U^dagger: each row transforms with conj(U)
  for (std::int64_t row = 0; row < dim; ++row) {
    for (std::int64_t rest = 0; rest < dim; ++rest) {
      if (static_cast<std::uint64_t>(rest) & gate_mask) continue;
      for (std::int64_t a = 0; a < ldim; ++a)
        buf[static_cast<std::size_t>(a)] = rho(
            row, static_cast<Eigen::Index>(static_cast<std::uint64_t>(rest) | table[static_cast<std::size_t>(a)]));
      for (std::int64_t a = 0; a < ldim; ++a) {
        Complex acc = 0.0;
        for (std::int64_t b = 0; b < ldim; ++b)
          acc += std::conj(u(a, b)) * buf[static_cast<std::size_t>(b)];
        rho(row, static_cast<Eigen::Index>(static_cast<std::uint64_t>(rest) | table[static_cast<std::size_t>(a)])) = acc;
      }
    }
  }
}

// Amplitude damping then pure dephasing on one qubit, written directly on
// the density-matrix entries.
void apply_relaxation(Eigen::MatrixXcd& rho, int q, double gamma, double lambda_phi) {
  if (gamma == 0.0 && lambda_phi == 1.0) return;
  const std::int64_t dim = rho.rows();
  const std::uint64_t bit = std::uint64_t{1} << q;
  const double keep = std::sqrt(1.0 - gamma) * lambda_phi;
  for (std::int64_t r = 0; r < dim; ++r) {
    const bool br = static_cast<std::uint64_t>(r) & bit;
    for (std::int64_t c = 0; c < dim; ++c) {
      const bool bc = static_cast<std::uint64_t>(c) & bit;
      if (br && bc) {
        rho(static_cast<Eigen::Index>(static_cast<std::uint64_t>(r) & ~bit),
            static_cast<Eigen::Index>(static_cast<std::uint64_t>(c) & ~bit)) += gamma * rho(r, c);
        rho(r, c) *= 1.0 - gamma;
      } else if (br != bc) {
        rho(r, c) *= keep;
      }
    }
  }
}

// Depolarizing on the acted qubits: rho -> (1-p) rho + p I/d (x) tr_g rho.
void apply_depolarizing(Eigen::MatrixXcd& rho, const std::vector<int>& qubits, double p) {
  if (p == 0.0) return;
  const auto table = scatter_table(qubits);
  const std::int64_t ldim = static_cast<std::int64_t>(table.size());
  const std::int64_t dim = rho.rows();
  std::uint64_t gate_mask = 0;
  for (int q : qubits) gate_mask |= std::uint64_t{1} << q;

  for (std::int64_t r = 0; r < dim; ++r) {
    if (static_cast<std::uint64_t>(r) & gate_mask) continue;
    for (std::int64_t c = 0; c < dim; ++c) {
      if (static_cast<std::uint64_t>(c) & gate_mask) continue;
      Complex traced = 0.0;
      for (std::int64_t v = 0; v < ldim; ++v)
        traced += rho(static_cast<Eigen::Index>(static_cast<std::uint64_t>(r) | table[static_cast<std::size_t>(v)]),
                      static_cast<Eigen::Index>(static_cast<std::uint64_t>(c) | table[static_cast<std::size_t>(v)]));
      traced *= p / static_cast<double>(ldim);
      for (std::int64_t a = 0; a < ldim; ++a) {
        const auto ra = static_cast<Eigen::Index>(static_cast<std::uint64_t>(r) | table[static_cast<std::size_t>(a)]);
        for (std::int64_t b = 0; b < ldim; ++b) {
          const auto cb = static_cast<Eigen::Index>(static_cast<std::uint64_t>(c) | table[static_cast<std::size_t>(b)]);
          rho(ra, cb) *= 1.0 - p;
          if (a == b) rho(ra, cb) += traced;
        }
      }
    }
  }
}

}  // namespace

QuantumState run_pure(const Circuit& circuit, std::uint64_t initial) {
  circuit.validate();
  if (circuit.n_qubits > kMaxStatevectorQubits)
    throw CapacityError("statevector simulation limited to 24 qubits");
  if (!circuit.fully_bound()) throw ContractError("circuit has unbound parameters");
  QuantumState s = QuantumState::basis_state(circuit.n_qubits, initial);
  for (const auto& op : circuit.ops) apply_unitary_vec(s.vec, gate_unitary(op), op.qubits);
  return s;
}

QuantumState run_noisy(const Circuit& circuit, std::uint64_t initial, const NoiseModel& nm) {
  circuit.validate();
  nm.validate();
  if (circuit.n_qubits > kMaxDensityQubits)
    throw CapacityError("density-matrix simulation limited to 10 qubits");
  if (!circuit.fully_bound()) throw ContractError("circuit has unbound parameters");

  const Circuit flat = decompose_circuit(circuit);
  QuantumState s = QuantumState::basis_state(circuit.n_qubits, initial).to_density();

  for (const auto& op : flat.ops) {
    apply_unitary_density(s.rho, gate_unitary(op), op.qubits);
    const bool two_qubit = gate_arity(op.kind) == 2;
    double gamma = 0.0, lambda_phi = 1.0;
    relaxation_factors(nm, two_qubit ? nm.dur_2q : nm.dur_1q, gamma, lambda_phi);
    for (int q : op.qubits) apply_relaxation(s.rho, q, gamma, lambda_phi);
    apply_depolarizing(s.rho, op.qubits, two_qubit ? nm.depol_2q : nm.depol_1q);
  }

  const double drift = std::abs(s.rho.trace().real() - 1.0) + std::abs(s.rho.trace().imag());
  if (drift > 1e-10) throw InternalError("density matrix trace drifted");
  return s;
}

void relaxation_factors(const NoiseModel& nm, double duration, double& gamma,
                        double& lambda_phi) {
  gamma = 0.0;
  lambda_phi = 1.0;
  if (duration <= 0) return;
  const double amp_coherence = nm.t1 > 0 ? std::exp(-duration / (2 * nm.t1)) : 1.0;
  if (nm.t1 > 0) gamma = 1.0 - std::exp(-duration / nm.t1);
  if (nm.t2 > 0) lambda_phi = std::exp(-duration / nm.t2) / amp_coherence;
  lambda_phi = std::min(lambda_phi, 1.0);
}

std::vector<Eigen::Matrix2cd> relaxation_kraus(double gamma, double lambda_phi) {
  // amplitude damping
  Eigen::Matrix2cd a0 = Eigen::Matrix2cd::Zero(), a1 = Eigen::Matrix2cd::Zero();
  a0(0, 0) = 1.0;
  a0(1, 1) = std::sqrt(1.0 - gamma);
  a1(0, 1) = std::sqrt(gamma);
  // pure dephasing with off-diagonal factor lambda_phi
  const double pz = (1.0 - lambda_phi) / 2.0;
  Eigen::Matrix2cd d0 = std::sqrt(1.0 - pz) * Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd d1 = Eigen::Matrix2cd::Zero();
  d1(0, 0) = std::sqrt(pz);
  d1(1, 1) = -std::sqrt(pz);

  std::vector<Eigen::Matrix2cd> kraus;
  for (const auto& d : {d0, d1})
    for (const auto& a : {a0, a1}) {
      Eigen::Matrix2cd k = d * a;
      if (k.cwiseAbs().maxCoeff() > 0) kraus.push_back(k);
    }
  return kraus;
}

double ShotStream::next_normal() {
  // Box-Muller with explicit arithmetic so draws are engine-defined only.
  const double u1 = 1.0 - static_cast<double>(engine() >> 11) * 0x1.0p-53;
  const double u2 = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t split_stream_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double energy_with_shots(const PauliSum& h, const PauliSum& h_squared,
                         const QuantumState& state, const ShotModel& sm, ShotStream& stream) {
  const double e = expectation(h, state);
  if (!sm.enabled) return e;
  sm.validate();
  double var = expectation(h_squared, state) - e * e;
  if (var < -1e-10) throw ContractError("negative energy variance");
  var = std::max(var, 0.0);
  const double g = stream.next_normal();
  return e + g * std::sqrt(var / static_cast<double>(sm.shots));
}

double energy_with_shots(const PauliSum& h, const QuantumState& state, const ShotModel& sm,
                         ShotStream& stream) {
  if (!sm.enabled) return expectation(h, state);
  return energy_with_shots(h, multiply(h, h), state, sm, stream);
}

}  // namespace mrem
