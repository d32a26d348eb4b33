#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mrem/driver.hpp"
#include "mrem/fermion.hpp"
#include "mrem/stateprep.hpp"

namespace mrem::cli {

/// Run configuration shared by the vqe/mrem/pes subcommands. File paths are
/// resolved relative to the working directory.
struct RunConfig {
  std::string hamiltonian_path;
  std::string penalized_hamiltonian_path;  // optional pre-penalized operator
  std::string mr_target_path;
  std::string template_path;
  std::optional<OrbitalLayout> layout;
  double lambda = 0.0;
  int layers = 3;
  NoiseModel noise;
  ShotModel shots;
  ImFilConfig optimizer;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  bool noiseless = false;
  bool hf_only = false;
  bool mr_only = false;
};

RunConfig load_run_config(const std::string& path);

struct SweepConfig {
  RunConfig shared;
  std::vector<std::string> labels;
  std::vector<double> rs;
  std::vector<std::string> hamiltonians;
  std::vector<std::string> mr_targets;
  std::vector<std::string> templates;
};

SweepConfig load_sweep_config(const std::string& path);

/// Builds the (possibly penalized) optimization Hamiltonian for a config.
PauliSum objective_hamiltonian_for(const RunConfig& cfg, const PauliSum& h);

/// Rows of the shipped reference tables.
struct MrStateRow {
  std::string molecule;
  double r = 0.0;
  int n_qubits = 0;
  std::string template_name;
  std::string reference;
  std::vector<std::pair<std::string, double>> dets;  // includes reference first
  std::vector<double> thetas;
};

struct EnergyRow {
  std::string molecule;
  double r = 0.0;
  double exact = 0.0;
  double vqe_mr = 0.0, err_vqe_mr = 0.0;
  double vqe_hf = 0.0, err_vqe_hf = 0.0;
  double mrem = 0.0, err_mrem = 0.0;
  double rem = 0.0, err_rem = 0.0;
};

struct ResourceRow {
  std::string molecule;
  int n_qubits = 0;
  int layers = 0;
  long ry_n1 = 0, ry_n2 = 0;
  long hf_n1 = 0;
  long mr_n1 = 0, mr_n2 = 0;
  bool pinned = false;
};

std::vector<MrStateRow> load_mr_state_rows(const std::string& fixtures_dir);
std::vector<EnergyRow> load_energy_rows(const std::string& fixtures_dir);
std::vector<ResourceRow> load_resource_rows(const std::string& fixtures_dir);

MRTarget target_from_row(const MrStateRow& row);
PrepTemplate template_from_row(const MrStateRow& row, const std::string& fixtures_dir);

struct FixtureReport {
  int checked = 0;
  int failed = 0;
  std::vector<std::string> lines;

  void pass(const std::string& what);
  void fail(const std::string& what);
  void note(const std::string& what);
};

/// Re-derives every checkable fixture value: compiled amplitudes from the
/// tabulated parameters and from solved parameters (5e-4), error-column
/// arithmetic (1.5e-4), and pinned gate counts (exact).
FixtureReport validate_fixtures(const std::string& fixtures_dir);

}  // namespace mrem::cli
