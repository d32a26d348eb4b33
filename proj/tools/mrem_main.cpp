#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_support.hpp"
#include "mrem/taper.hpp"

namespace fs = std::filesystem;
using namespace mrem;
using cli::RunConfig;

namespace {

// exit codes: 0 ok, 1 validation failure, 2 usage error, 3 internal error
constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kUsageError = 2;
constexpr int kInternalError = 3;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool noiseless = false;
  std::string shots;  // "off" or a count
};

void add_common_options(CLI::App* cmd, Overrides& ov, bool config_required) {
  auto* copt = cmd->add_option("--config", ov.config, "run configuration JSON file");
  if (config_required) copt->required();
  cmd->add_option("--seed", ov.seed, "seed for the shot-noise streams");
  cmd->add_option("--out", ov.out, "output directory");
  cmd->add_flag("--noiseless", ov.noiseless, "disable gate noise and sampling noise");
  cmd->add_option("--shots", ov.shots, "sampling shots per evaluation, or 'off'");
}

void apply_shot_override(RunConfig& cfg, const std::string& shots) {
  if (shots.empty()) return;
  if (shots == "off") {
    cfg.shots.enabled = false;
    return;
  }
  cfg.shots.shots = std::stoll(shots);
  cfg.shots.enabled = true;
  cfg.shots.validate();
}

RunConfig resolve_config(const Overrides& ov) {
  RunConfig cfg;
  if (!ov.config.empty()) cfg = cli::load_run_config(ov.config);
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.out) cfg.out_dir = *ov.out;
  if (ov.noiseless) cfg.noiseless = true;
  apply_shot_override(cfg, ov.shots);
  return cfg;
}

std::uint64_t effective_seed(const RunConfig& cfg) {
  return cfg.seed != 0 ? cfg.seed : cfg.noise.seed;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

int cmd_parse(const std::string& path, const std::string& out_file) {
  const PauliSum h = read_pauli_sum_file(path);
  if (h.terms.empty()) std::cout << "warning: zero-term sum" << std::endl;
  std::cout << "n_qubits=" << h.n_qubits << " terms=" << h.terms.size() << std::endl;
  if (!out_file.empty()) write_text(out_file, serialize(h));
  return kOk;
}

int cmd_exact(const std::string& path) {
  const GroundState gs = exact_ground_state(read_pauli_sum_file(path));
  std::printf("ground_energy=%.12f\n", gs.energy);
  return kOk;
}

int cmd_taper(const RunConfig& cfg) {
  if (cfg.hamiltonian_path.empty()) throw ContractError("taper needs a Hamiltonian file");
  if (!cfg.layout) throw ContractError("taper needs a layout for the reference sector");

  const PauliSum h = read_pauli_sum_file(cfg.hamiltonian_path);
  if (h.n_qubits != cfg.layout->n_qubits())
    throw DimensionError("layout width does not match the Hamiltonian");
  const std::uint64_t reference = hf_bitstring(*cfg.layout);

  const auto generators = find_symmetries(h);
  const SymmetrySet sym = make_symmetry_set_for_determinant(h, generators, reference);
  const PauliSum reduced = taper_operator(h, sym);

  nlohmann::json info;
  info["n_qubits_full"] = h.n_qubits;
  info["n_qubits_reduced"] = reduced.n_qubits;
  info["tapered_qubits"] = sym.tapered_qubits;
  info["sector"] = sym.sector;
  nlohmann::json jgens = nlohmann::json::array();
  for (const auto& g : sym.generators) jgens.push_back(g.label());
  info["generators"] = jgens;

  auto project = [&](std::uint64_t det) {
    const ProjectedDeterminant p = project_determinant(det, sym);
    return nlohmann::json{{"det", format_bitstring(det, h.n_qubits)},
                          {"reduced", format_bitstring(p.bits, reduced.n_qubits)},
                          {"sign", p.sign}};
  };
  nlohmann::json jmap = nlohmann::json::array();
  jmap.push_back(project(reference));

  MRTarget reduced_target;
  bool have_target = false;
  if (!cfg.mr_target_path.empty()) {
    const MRTarget full_target = read_mr_target_file(cfg.mr_target_path);
    if (full_target.n_qubits != h.n_qubits)
      throw DimensionError("target width does not match the Hamiltonian");
    reduced_target.n_qubits = reduced.n_qubits;
    for (const auto& [det, coeff] : full_target.components) {
      const ProjectedDeterminant p = project_determinant(det, sym);
      jmap.push_back(project(det));
      reduced_target.components.emplace_back(p.bits, coeff * p.sign);
      if (det == full_target.reference) reduced_target.reference = p.bits;
    }
    reduced_target.validate_and_normalize();
    have_target = true;
  }
  info["projection_map"] = jmap;

  const fs::path out_dir(cfg.out_dir);
  write_text(out_dir / "tapered.txt", serialize(reduced));
  write_text(out_dir / "taper_info.json", info.dump(2) + "\n");
  if (have_target) write_text(out_dir / "tapered_mr.json", reduced_target.to_json_text());
  if (cfg.lambda > 0) {
    const PauliSum hp = add_spin_penalty(h, *cfg.layout, {cfg.lambda});
    const SymmetrySet sym_p = make_symmetry_set(hp, sym.generators, sym.sector);
    write_text(out_dir / "tapered_penalized.txt", serialize(taper_operator(hp, sym_p)));
  }
  std::cout << "tapered " << h.n_qubits << " -> " << reduced.n_qubits << " qubits ("
            << sym.size() << " generators), wrote " << (out_dir / "tapered.txt").string()
            << std::endl;
  return kOk;
}

int cmd_prep(const RunConfig& cfg) {
  if (cfg.mr_target_path.empty() || cfg.template_path.empty())
    throw ContractError("prep needs a target and a template");

  const MRTarget target = read_mr_target_file(cfg.mr_target_path);
  const PrepTemplate tmpl = read_template_file(cfg.template_path);
  const auto [circuit, angles] = compile_state(target, tmpl);
  const PrepReport report = verify_preparation(circuit, target);

  std::cout << "angles:";
  for (double a : angles) std::printf(" %.6f", a);
  std::printf("\nmax_amplitude_error=%.3e support_leakage=%.3e\n", report.max_amplitude_error,
              report.support_leakage);
  std::cout << report.note << std::endl;

  nlohmann::json jr;
  jr["angles"] = angles;
  jr["max_amplitude_error"] = report.max_amplitude_error;
  jr["support_leakage"] = report.support_leakage;
  jr["amplitude_errors"] = report.amplitude_errors;
  jr["weight_check_applicable"] = report.weight_check_applicable;
  jr["weights_uniform"] = report.weights_uniform;
  jr["note"] = report.note;

  const fs::path out_dir(cfg.out_dir);
  write_text(out_dir / "prep_circuit.json", circuit_to_json_text(circuit));
  write_text(out_dir / "prep_report.json", jr.dump(2) + "\n");
  return kOk;
}

PesPoint point_from_config(const RunConfig& cfg) {
  if (cfg.hamiltonian_path.empty()) throw ContractError("config needs a Hamiltonian");
  PesPoint point;
  point.label = fs::path(cfg.hamiltonian_path).stem().string();
  point.hamiltonian = read_pauli_sum_file(cfg.hamiltonian_path);
  point.objective_hamiltonian = cli::objective_hamiltonian_for(cfg, point.hamiltonian);
  if (!cfg.mr_target_path.empty()) {
    point.target = read_mr_target_file(cfg.mr_target_path);
    if (cfg.template_path.empty()) throw ContractError("an MR target needs a template");
    point.prep_template = read_template_file(cfg.template_path);
  } else {
    if (!cfg.layout) throw ContractError("config needs an MR target or a layout");
    point.target.n_qubits = point.hamiltonian.n_qubits;
    point.target.reference = hf_bitstring(*cfg.layout);
    point.target.components = {{point.target.reference, 1.0}};
    point.prep_template = PrepTemplate{Circuit(point.hamiltonian.n_qubits)};
  }
  return point;
}

PesOptions options_from_config(const RunConfig& cfg) {
  PesOptions options;
  options.layers = cfg.layers;
  options.noise = cfg.noise;
  options.shots = cfg.shots;
  options.noiseless = cfg.noiseless;
  options.imfil = cfg.optimizer;
  options.seed = effective_seed(cfg);
  options.hf_only = cfg.hf_only;
  options.mr_only = cfg.mr_only;
  return options;
}

nlohmann::json record_to_json(const MitigationRecord& rec) {
  return nlohmann::json{{"e_exact_ref", rec.e_exact_ref}, {"e_noisy_ref", rec.e_noisy_ref},
                        {"delta", rec.delta},             {"e_vqe_raw", rec.e_vqe_raw},
                        {"e_mitigated", rec.e_mitigated}, {"iterations", rec.iterations},
                        {"evaluations", rec.evaluations}};
}

int cmd_vqe(const RunConfig& cfg) {
  const PesPoint point = point_from_config(cfg);
  PesOptions options = options_from_config(cfg);
  // one reference only: the MR preparation when a target is configured
  options.hf_only = point.target.components.size() == 1;
  options.mr_only = !options.hf_only;
  const auto records = run_pes_sweep({point}, options);
  if (!records[0].error.empty()) throw Error(records[0].error);
  const MitigationRecord rec = records[0].mr ? *records[0].mr : *records[0].hf;
  std::printf("energy=%.12f iterations=%d evaluations=%lld\n", rec.e_vqe_raw, rec.iterations,
              rec.evaluations);
  write_text(fs::path(cfg.out_dir) / "vqe.json", record_to_json(rec).dump(2) + "\n");
  return kOk;
}

int cmd_mrem(const RunConfig& cfg) {
  const PesPoint point = point_from_config(cfg);
  const PesOptions options = options_from_config(cfg);
  const auto records = run_pes_sweep({point}, options);
  if (!records[0].error.empty()) throw Error(records[0].error);

  nlohmann::json j;
  j["label"] = records[0].label;
  j["e_exact_diag"] = records[0].e_exact_diag;
  if (records[0].hf) j["hf"] = record_to_json(*records[0].hf);
  if (records[0].mr) j["mr"] = record_to_json(*records[0].mr);
  write_text(fs::path(cfg.out_dir) / "mrem.json", j.dump(2) + "\n");

  std::printf("exact_diag=%.12f\n", records[0].e_exact_diag);
  if (records[0].hf)
    std::printf("hf: raw=%.10f corrected=%.10f delta=%.10f\n", records[0].hf->e_vqe_raw,
                records[0].hf->e_mitigated, records[0].hf->delta);
  if (records[0].mr)
    std::printf("mr: raw=%.10f corrected=%.10f delta=%.10f\n", records[0].mr->e_vqe_raw,
                records[0].mr->e_mitigated, records[0].mr->delta);
  return kOk;
}

int cmd_pes(const Overrides& ov) {
  cli::SweepConfig sweep = cli::load_sweep_config(ov.config);
  RunConfig cfg = sweep.shared;
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.out) cfg.out_dir = *ov.out;
  if (ov.noiseless) cfg.noiseless = true;
  apply_shot_override(cfg, ov.shots);

  std::vector<PesPoint> points;
  for (std::size_t i = 0; i < sweep.labels.size(); ++i) {
    RunConfig point_cfg = cfg;
    point_cfg.hamiltonian_path = sweep.hamiltonians[i];
    point_cfg.mr_target_path = sweep.mr_targets[i];
    point_cfg.template_path = sweep.templates[i];
    PesPoint point = point_from_config(point_cfg);
    point.label = sweep.labels[i];
    point.r = sweep.rs[i];
    points.push_back(std::move(point));
  }
  const PesOptions options = options_from_config(cfg);
  const auto records = run_pes_sweep(points, options);

  const fs::path out_dir(cfg.out_dir);
  write_text(out_dir / "results.csv", render_results_csv(records));
  write_text(out_dir / "results_long.csv", render_long_csv(records));

  int failures = 0;
  for (const auto& rec : records) {
    if (rec.error.empty()) {
      std::printf("%s: exact=%.6f", rec.label.c_str(), rec.e_exact_diag);
      if (rec.hf)
        std::printf(" rem_err=%.6f", std::abs(rec.hf->e_mitigated - rec.e_exact_diag));
      if (rec.mr)
        std::printf(" mrem_err=%.6f", std::abs(rec.mr->e_mitigated - rec.e_exact_diag));
      std::printf("\n");
    } else {
      ++failures;
      std::printf("%s: failed (%s)\n", rec.label.c_str(), rec.error.c_str());
    }
  }
  std::cout << "wrote " << (out_dir / "results.csv").string() << std::endl;
  return failures == static_cast<int>(records.size()) && !records.empty() ? kValidationFailure
                                                                          : kOk;
}

int cmd_validate_fixtures(const std::string& fixtures_dir) {
  const cli::FixtureReport report = cli::validate_fixtures(fixtures_dir);
  for (const auto& line : report.lines) std::cout << line << "\n";
  std::printf("%d checks, %d failed\n", report.checked, report.failed);
  return report.failed == 0 ? kOk : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multireference-state error mitigation for variational quantum eigensolvers"};
  app.require_subcommand(1);

  auto* parse_cmd = app.add_subcommand("parse", "parse and normalize a Hamiltonian file");
  std::string parse_input, parse_out;
  parse_cmd->add_option("hamiltonian", parse_input, "Pauli-sum text file")->required();
  parse_cmd->add_option("--out", parse_out, "write the normalized sum to this file");

  auto* exact_cmd = app.add_subcommand("exact", "exact ground-state energy by diagonalization");
  std::string exact_input;
  exact_cmd->add_option("hamiltonian", exact_input, "Pauli-sum text file")->required();

  auto* taper_cmd = app.add_subcommand("taper", "remove qubits via Z2 Pauli symmetries");
  Overrides taper_ov;
  std::string taper_input, taper_target;
  double taper_lambda = -1.0;
  int taper_spatial = 0, taper_alpha = -1, taper_beta = -1;
  taper_cmd->add_option("hamiltonian", taper_input, "Pauli-sum text file");
  add_common_options(taper_cmd, taper_ov, false);
  taper_cmd->add_option("--lambda", taper_lambda, "also taper the spin-penalized sum");
  taper_cmd->add_option("--mr-target", taper_target,
                        "project this target onto the reduced register");
  taper_cmd->add_option("--n-spatial", taper_spatial, "spatial orbital count");
  taper_cmd->add_option("--n-alpha", taper_alpha, "alpha electron count");
  taper_cmd->add_option("--n-beta", taper_beta, "beta electron count");

  auto* prep_cmd = app.add_subcommand("prep", "compile a multireference preparation circuit");
  Overrides prep_ov;
  std::string prep_target, prep_template;
  add_common_options(prep_cmd, prep_ov, false);
  prep_cmd->add_option("--target", prep_target, "MR target JSON file");
  prep_cmd->add_option("--template", prep_template, "preparation template JSON file");

  auto* vqe_cmd = app.add_subcommand("vqe", "run one variational optimization");
  Overrides vqe_ov;
  add_common_options(vqe_cmd, vqe_ov, true);

  auto* mrem_cmd = app.add_subcommand("mrem", "run the full mitigation pipeline on one point");
  Overrides mrem_ov;
  add_common_options(mrem_cmd, mrem_ov, true);

  auto* pes_cmd = app.add_subcommand("pes", "sweep a potential-energy surface");
  Overrides pes_ov;
  add_common_options(pes_cmd, pes_ov, true);

  auto* validate_cmd =
      app.add_subcommand("validate-fixtures", "re-derive the shipped reference tables");
  std::string fixtures_dir = "fixtures";
  validate_cmd->add_option("--fixtures", fixtures_dir, "fixtures directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << std::endl;
    return kUsageError;
  }

  try {
    if (*parse_cmd) return cmd_parse(parse_input, parse_out);
    if (*exact_cmd) return cmd_exact(exact_input);
    if (*taper_cmd) {
      RunConfig cfg = resolve_config(taper_ov);
      if (!taper_input.empty()) cfg.hamiltonian_path = taper_input;
      if (taper_lambda >= 0) cfg.lambda = taper_lambda;
      if (!taper_target.empty()) cfg.mr_target_path = taper_target;
      if (taper_spatial > 0) {
        OrbitalLayout layout{taper_spatial, std::max(taper_alpha, 0),
                             std::max(taper_beta, 0)};
        layout.validate();
        cfg.layout = layout;
      }
      return cmd_taper(cfg);
    }
    if (*prep_cmd) {
      RunConfig cfg = resolve_config(prep_ov);
      if (!prep_target.empty()) cfg.mr_target_path = prep_target;
      if (!prep_template.empty()) cfg.template_path = prep_template;
      return cmd_prep(cfg);
    }
    if (*vqe_cmd) return cmd_vqe(resolve_config(vqe_ov));
    if (*mrem_cmd) return cmd_mrem(resolve_config(mrem_ov));
    if (*pes_cmd) return cmd_pes(pes_ov);
    if (*validate_cmd) return cmd_validate_fixtures(fixtures_dir);
  } catch (const InternalError& e) {
    std::cerr << "error: internal: " << e.what() << std::endl;
    return kInternalError;
  } catch (const SolverError& e) {
    std::cerr << "error: solver: " << e.what() << std::endl;
    return kValidationFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << std::endl;
    return kInternalError;
  }
  return kUsageError;
}
