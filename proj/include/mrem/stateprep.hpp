#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrem/circuit.hpp"
#include "mrem/sim.hpp"

namespace mrem {

/// Parses "00110" (leftmost character = highest qubit) into a basis index.
std::uint64_t parse_bitstring(const std::string& s);
std::string format_bitstring(std::uint64_t bits, int n_qubits);

/// A truncated multireference target: reference determinant plus real
/// coefficients on a small set of determinants (reference first).
struct MRTarget {
  int n_qubits = 0;
  std::uint64_t reference = 0;
  std::vector<std::pair<std::uint64_t, double>> components;

  /// Checks distinctness and near-unit norm (1e-3 slack for rounded
  /// table data), renormalizes exactly and flips the global sign so the
  /// reference coefficient is non-negative.
  void validate_and_normalize();

  static MRTarget from_json_text(const std::string& text);
  std::string to_json_text() const;
};

MRTarget read_mr_target_file(const std::string& path);

/// A preparation circuit skeleton over {G, CG, G2, CG2, CX, X} with
/// symbolic rotation slots; the reference X layer is not part of it.
struct PrepTemplate {
  Circuit circuit;

  int slot_count() const { return circuit.n_params; }
  void validate() const;
};

PrepTemplate read_template_file(const std::string& path);

/// Reference X layer followed by the template bound at `angles`.
Circuit prepare_circuit(const MRTarget& target, const PrepTemplate& tmpl,
                        std::span<const double> angles);

/// Rotation angles reproducing the target amplitudes, from damped
/// Gauss-Newton on the amplitude residuals (exact parameter-shift
/// Jacobian) with a closed-form cascade fallback. Deterministic.
std::vector<double> solve_parameters(const MRTarget& target, const PrepTemplate& tmpl);

/// Solves and binds; the compiled state matches the renormalized target
/// amplitudes to 1e-8 with no support leakage.
std::pair<Circuit, std::vector<double>> compile_state(const MRTarget& target,
                                                      const PrepTemplate& tmpl);

struct PrepReport {
  std::vector<double> amplitude_errors;  // per component, |amp - coeff|
  double max_amplitude_error = 0.0;
  double support_leakage = 0.0;  // probability outside the target support
  bool weight_check_applicable = false;
  bool weights_uniform = false;
  std::string note;
};

/// Report-only check of a bound circuit against a target: amplitude
/// deviations, leakage, and (when the support shares one Hamming weight)
/// a particle-number consistency note.
PrepReport verify_preparation(const Circuit& bound, const MRTarget& target);

}  // namespace mrem
