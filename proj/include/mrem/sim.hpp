#pragma once

#include <cstdint>
#include <random>

#include "mrem/circuit.hpp"
#include "mrem/pauli.hpp"
#include "mrem/state.hpp"

namespace mrem {

inline constexpr int kMaxStatevectorQubits = 24;
inline constexpr int kMaxDensityQubits = 10;

/// Gate-attached noise: depolarizing probability per gate class plus
/// thermal relaxation (amplitude damping toward |0> with T1, total phase
/// coherence decay with T2, T2 <= 2*T1) over per-class gate durations.
/// Times and durations share one unit (seconds in the shipped configs);
/// a non-positive T disables the corresponding decay.
struct NoiseModel {
  double depol_1q = 0.0;
  double depol_2q = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double dur_1q = 0.0;
  double dur_2q = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  bool has_noise() const;
};

struct ShotModel {
  long long shots = 10000000;
  bool enabled = false;

  void validate() const;
};

NoiseModel noise_model_from_json_text(const std::string& text);
ShotModel shot_model_from_json_text(const std::string& text);

/// Applies the bound circuit to |initial>, composite gates applied exactly.
QuantumState run_pure(const Circuit& circuit, std::uint64_t initial);

/// Density-matrix simulation: per gate the ideal unitary, then thermal
/// relaxation on each acted qubit, then the depolarizing channel of the
/// gate class. Composite Givens gates are decomposed to {X,H,RY,CX,CRY}
/// first so every noisy gate is a one- or two-qubit gate.
QuantumState run_noisy(const Circuit& circuit, std::uint64_t initial, const NoiseModel& nm);

/// Kraus operators of the single-qubit relaxation step (amplitude damping
/// gamma followed by pure dephasing with off-diagonal factor lambda_phi).
std::vector<Eigen::Matrix2cd> relaxation_kraus(double gamma, double lambda_phi);

/// Relaxation parameters for one gate class.
void relaxation_factors(const NoiseModel& nm, double duration, double& gamma,
                        double& lambda_phi);

/// Deterministic normal-variate stream (Box-Muller over mt19937_64, so
/// results are bit-reproducible across platforms for a fixed seed).
struct ShotStream {
  explicit ShotStream(std::uint64_t seed) : engine(seed) {}
  double next_normal();

  std::mt19937_64 engine;
};

/// Decorrelates parallel evaluations: a stream seeded from (seed, counter)
/// does not depend on evaluation order.
std::uint64_t split_stream_seed(std::uint64_t seed, std::uint64_t counter);

/// Normal-approximation shot noise: E + g * sigma / sqrt(shots) with
/// sigma^2 = <h^2> - <h>^2 and g drawn from the stream; exact E when
/// sampling is disabled. The h_squared overload avoids re-deriving h^2.
double energy_with_shots(const PauliSum& h, const QuantumState& state, const ShotModel& sm,
                         ShotStream& stream);
double energy_with_shots(const PauliSum& h, const PauliSum& h_squared,
                         const QuantumState& state, const ShotModel& sm, ShotStream& stream);

}  // namespace mrem
