#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrem/circuit.hpp"
#include "mrem/pauli.hpp"
#include "mrem/sim.hpp"
#include "mrem/stateprep.hpp"

namespace mrem {

/// One variational problem: the recorded Hamiltonian, the (possibly
/// spin-penalized) optimization Hamiltonian, the ansatz and the bound
/// state-preparation circuit. Composition order is fixed: the ansatz acts
/// on |0> first, the preparation circuit after it, so zero parameters
/// reproduce the prepared reference exactly.
struct VqeProblem {
  PauliSum hamiltonian;
  PauliSum objective_hamiltonian;  // equals hamiltonian when no penalty
  Circuit ansatz;
  Circuit init_circuit;
  NoiseModel noise;
  ShotModel shots;
  bool noiseless = false;  // force pure simulation regardless of `noise`
  std::uint64_t seed = 0;

  // squared sums cached for the shot-noise variance
  PauliSum hamiltonian_sq;
  PauliSum objective_sq;

  void prepare();  // validates widths and fills the squared caches
};

/// Energy of `h` at the given parameters through the problem's simulation
/// and shot settings; the stream is split from (seed, eval_counter).
double evaluate_energy(const VqeProblem& problem, std::span<const double> theta,
                       const PauliSum& h, const PauliSum& h_squared,
                       std::uint64_t eval_counter);

/// The optimizer objective: evaluate_energy on objective_hamiltonian.
double objective(const VqeProblem& problem, std::span<const double> theta,
                 std::uint64_t eval_counter);

struct ImFilConfig {
  long long budget = 0;         // 0 picks 10 * dim * (2 * dim + 1)
  std::vector<double> scales;   // empty picks pi * 2^-1 ... pi * 2^-8
  int stencil_failure_limit = 1;
  double grad_tolerance = 1e-6;

  long long effective_budget(int dim) const;
  std::vector<double> effective_scales() const;
};

struct ImFilResult {
  std::vector<double> theta;
  double f_min = 0.0;
  long long evaluations = 0;
  int iterations = 0;  // stencil cycles
  bool truncated = false;
  std::vector<std::pair<int, double>> trace;  // (iteration, best f so far)
};

/// Implicit filtering: central-difference stencils over a shrinking scale
/// sequence with improvement-chasing line searches. Never exceeds the
/// budget; returns the best point seen (truncated flag when the budget
/// ran out). Deterministic for a deterministic objective.
ImFilResult imfil_minimize(const std::function<double(std::span<const double>)>& f,
                           std::vector<double> theta0, const ImFilConfig& cfg);

/// One mitigation run: reference energies, correction, raw and corrected
/// VQE energies. e_mitigated = e_vqe_raw - delta holds exactly.
struct MitigationRecord {
  double e_exact_ref = 0.0;
  double e_noisy_ref = 0.0;
  double delta = 0.0;
  double e_vqe_raw = 0.0;
  double e_mitigated = 0.0;
  int iterations = 0;
  long long evaluations = 0;
};

/// Reference-state mitigation pipeline: classical reference energy, noisy
/// reference energy at zero parameters, optimization of the (optionally
/// penalized) objective from zero, then the corrected energy. Recorded
/// energies always use the unpenalized Hamiltonian.
MitigationRecord run_mrem(const VqeProblem& problem, const ImFilConfig& cfg);

struct PesPoint {
  std::string label;
  double r = 0.0;
  PauliSum hamiltonian;
  PauliSum objective_hamiltonian;
  MRTarget target;
  PrepTemplate prep_template;
};

struct PesOptions {
  int layers = 3;
  NoiseModel noise;
  ShotModel shots;
  bool noiseless = false;
  ImFilConfig imfil;
  std::uint64_t seed = 0;
  bool hf_only = false;
  bool mr_only = false;
};

struct PesRecord {
  std::string label;
  double r = 0.0;
  double e_exact_diag = 0.0;
  std::optional<MitigationRecord> hf;
  std::optional<MitigationRecord> mr;
  std::string error;  // empty on success
};

/// Sweeps independent points (run concurrently, merged in input order);
/// per-point failures land in the record's error field without aborting.
std::vector<PesRecord> run_pes_sweep(const std::vector<PesPoint>& points,
                                     const PesOptions& options);

/// Results table; one row per point, fixed 10-decimal formatting so equal
/// configurations produce byte-identical files.
std::string render_results_csv(const std::vector<PesRecord>& records);

/// Plot-ready long format: point, series, value.
std::string render_long_csv(const std::vector<PesRecord>& records);

}  // namespace mrem
