#include "mrem/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>

namespace mrem {

void VqeProblem::prepare() {
  hamiltonian.normalize();
  objective_hamiltonian.normalize();
  if (hamiltonian.n_qubits != ansatz.n_qubits ||
      hamiltonian.n_qubits != init_circuit.n_qubits ||
      objective_hamiltonian.n_qubits != hamiltonian.n_qubits)
    throw DimensionError("problem widths disagree");
  if (!init_circuit.fully_bound())
    throw ContractError("state-preparation circuit must be bound");
  noise.validate();
  hamiltonian_sq = multiply(hamiltonian, hamiltonian);
  objective_sq = multiply(objective_hamiltonian, objective_hamiltonian);
}

double evaluate_energy(const VqeProblem& problem, std::span<const double> theta,
                       const PauliSum& h, const PauliSum& h_squared,
                       std::uint64_t eval_counter) {
  if (static_cast<int>(theta.size()) != problem.ansatz.n_params)
    throw ContractError("parameter vector length mismatch");
  if (problem.shots.enabled && !problem.noiseless && h_squared.terms.empty() &&
      !h.terms.empty())
    throw ContractError("problem not prepared: squared-sum cache is empty");
  const Circuit circuit =
      compose_init_after_ansatz(problem.ansatz.bind(theta), problem.init_circuit);
  const bool noisy = !problem.noiseless && problem.noise.has_noise();
  const QuantumState state =
      noisy ? run_noisy(circuit, 0, problem.noise) : run_pure(circuit, 0);
  ShotStream stream(split_stream_seed(problem.seed, eval_counter));
  ShotModel shots = problem.shots;
  if (problem.noiseless) shots.enabled = false;
  return energy_with_shots(h, h_squared, state, shots, stream);
}

double objective(const VqeProblem& problem, std::span<const double> theta,
                 std::uint64_t eval_counter) {
  return evaluate_energy(problem, theta, problem.objective_hamiltonian,
                         problem.objective_sq, eval_counter);
}

long long ImFilConfig::effective_budget(int dim) const {
  return budget > 0 ? budget : 10LL * dim * (2LL * dim + 1);
}

std::vector<double> ImFilConfig::effective_scales() const {
  if (!scales.empty()) {
    for (std::size_t i = 0; i + 1 < scales.size(); ++i)
      if (scales[i + 1] >= scales[i])
        throw ContractError("scales must be strictly decreasing");
    for (double s : scales)
      if (s <= 0) throw ContractError("scales must be positive");
    return scales;
  }
  std::vector<double> out;
  for (int k = 1; k <= 8; ++k) out.push_back(M_PI * std::pow(2.0, -k));
  return out;
}

namespace {

struct BudgetExhausted {};

}  // namespace

ImFilResult imfil_minimize(const std::function<double(std::span<const double>)>& f,
                           std::vector<double> theta0, const ImFilConfig& cfg) {
  const int dim = static_cast<int>(theta0.size());
  if (dim == 0) throw ContractError("empty parameter vector");
  const long long budget = cfg.effective_budget(dim);
  const std::vector<double> scales = cfg.effective_scales();
  if (budget < 2LL * dim + 1) throw ContractError("budget below one stencil");

  ImFilResult result;
  result.theta = theta0;

  long long evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    if (evals >= budget) throw BudgetExhausted{};
    ++evals;
    const double v = f(std::span<const double>(x));
    if (v < result.f_min) {
      result.f_min = v;
      result.theta = x;
    }
    return v;
  };

  std::vector<double> x = theta0;
  try {
    double fx = f(std::span<const double>(x));
    ++evals;
    result.f_min = fx;
    result.theta = x;
    result.trace.emplace_back(0, fx);

    for (double h : scales) {
      int failures = 0;
      while (failures < std::max(1, cfg.stencil_failure_limit)) {
        // central-difference stencil: gradient plus a diagonal curvature
        // estimate for a quasi-Newton step
        std::vector<double> grad(static_cast<std::size_t>(dim), 0.0);
        std::vector<double> curv(static_cast<std::size_t>(dim), 0.0);
        double stencil_best = fx;
        std::vector<double> stencil_best_x = x;
        for (int i = 0; i < dim; ++i) {
          std::vector<double> xp = x, xm = x;
          xp[static_cast<std::size_t>(i)] += h;
          xm[static_cast<std::size_t>(i)] -= h;
          const double fp = eval(xp);
          const double fm = eval(xm);
          grad[static_cast<std::size_t>(i)] = (fp - fm) / (2 * h);
          curv[static_cast<std::size_t>(i)] = (fp + fm - 2 * fx) / (h * h);
          if (fp < stencil_best) {
            stencil_best = fp;
            stencil_best_x = xp;
          }
          if (fm < stencil_best) {
            stencil_best = fm;
            stencil_best_x = xm;
          }
        }
        ++result.iterations;
        result.trace.emplace_back(result.iterations, result.f_min);

        double gnorm = 0.0;
        for (double g : grad) gnorm += g * g;
        gnorm = std::sqrt(gnorm);
        if (gnorm <= cfg.grad_tolerance * h) break;  // converged at this scale

        // descent direction: curvature-scaled where convex, gradient
        // elsewhere, capped so the first trial moves by at most one h
        std::vector<double> step(static_cast<std::size_t>(dim), 0.0);
        double step_norm = 0.0;
        for (int i = 0; i < dim; ++i) {
          const double g = grad[static_cast<std::size_t>(i)];
          const double c = curv[static_cast<std::size_t>(i)];
          double s = c > 1e-12 ? -g / c : -g * (h / gnorm);
          step[static_cast<std::size_t>(i)] = s;
          step_norm += s * s;
        }
        step_norm = std::sqrt(step_norm);
        if (step_norm > 0) {
          // line search: halve until improving, then double while improving
          bool moved = false;
          double lambda = 1.0;
          for (int half = 0; half < 6 && !moved; ++half, lambda *= 0.5) {
            std::vector<double> xt = x;
            for (int i = 0; i < dim; ++i)
              xt[static_cast<std::size_t>(i)] += lambda * step[static_cast<std::size_t>(i)];
            const double ft = eval(xt);
            if (ft >= fx) continue;
            x = xt;
            fx = ft;
            moved = true;
            for (int doubling = 0; doubling < 20; ++doubling) {
              lambda *= 2.0;
              std::vector<double> xs = x;
              for (int i = 0; i < dim; ++i)
                xs[static_cast<std::size_t>(i)] += lambda * step[static_cast<std::size_t>(i)];
              const double fs = eval(xs);
              if (fs >= fx) break;
              x = xs;
              fx = fs;
            }
          }
          if (moved) continue;
        }
        if (stencil_best < fx) {
          x = stencil_best_x;
          fx = stencil_best;
        } else {
          ++failures;  // stencil failure at this scale
        }
      }
    }
  } catch (const BudgetExhausted&) {
    result.truncated = true;
  }
  result.evaluations = evals;
  return result;
}

MitigationRecord run_mrem(const VqeProblem& problem_in, const ImFilConfig& cfg) {
  VqeProblem problem = problem_in;
  problem.prepare();
  const int dim = problem.ansatz.n_params;
  const std::vector<double> zero(static_cast<std::size_t>(dim), 0.0);

  MitigationRecord record;

  // Classical reference energy: the noiseless, shot-free energy of the
  // prepared reference through the identical evaluation path, so the
  // noiseless limit gives delta = 0 exactly.
  {
    VqeProblem exact = problem;
    exact.noiseless = true;
    record.e_exact_ref =
        evaluate_energy(exact, zero, exact.hamiltonian, exact.hamiltonian_sq, 0);
  }

  std::uint64_t counter = 0;
  record.e_noisy_ref =
      evaluate_energy(problem, zero, problem.hamiltonian, problem.hamiltonian_sq, counter++);

  auto f = [&](std::span<const double> theta) {
    return objective(problem, theta, counter++);
  };
  const ImFilResult opt = imfil_minimize(f, zero, cfg);

  record.e_vqe_raw = evaluate_energy(problem, opt.theta, problem.hamiltonian,
                                     problem.hamiltonian_sq, counter++);
  record.delta = record.e_noisy_ref - record.e_exact_ref;
  record.e_mitigated = record.e_vqe_raw - record.delta;
  record.iterations = opt.iterations;
  record.evaluations = opt.evaluations;
  return record;
}

namespace {

MitigationRecord run_reference(const PesPoint& point, const PesOptions& options,
                               const Circuit& init, std::uint64_t seed) {
  VqeProblem problem;
  problem.hamiltonian = point.hamiltonian;
  problem.objective_hamiltonian = point.objective_hamiltonian;
  problem.ansatz = build_ry_linear(point.hamiltonian.n_qubits, options.layers);
  problem.init_circuit = init;
  problem.noise = options.noise;
  problem.shots = options.shots;
  problem.noiseless = options.noiseless;
  problem.seed = seed;
  return run_mrem(problem, options.imfil);
}

PesRecord run_point(const PesPoint& point, const PesOptions& options, std::uint64_t index) {
  PesRecord rec;
  rec.label = point.label;
  rec.r = point.r;
  try {
    rec.e_exact_diag = exact_ground_state(point.hamiltonian).energy;

    if (!options.mr_only) {
      // HF-style reference: X layer on the reference determinant alone.
      MRTarget hf_target;
      hf_target.n_qubits = point.target.n_qubits;
      hf_target.reference = point.target.reference;
      hf_target.components = {{point.target.reference, 1.0}};
      PrepTemplate empty_template{Circuit(point.target.n_qubits)};
      const Circuit init = prepare_circuit(hf_target, empty_template, {});
      rec.hf = run_reference(point, options, init, split_stream_seed(options.seed, 2 * index));
    }
    if (!options.hf_only) {
      MRTarget target = point.target;
      target.validate_and_normalize();
      auto [init, angles] = compile_state(target, point.prep_template);
      rec.mr =
          run_reference(point, options, init, split_stream_seed(options.seed, 2 * index + 1));
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10f", v);
  return buf;
}

std::string opt_fmt(const std::optional<MitigationRecord>& r, double MitigationRecord::*field) {
  return r ? fmt((*r).*field) : std::string();
}

}  // namespace

std::vector<PesRecord> run_pes_sweep(const std::vector<PesPoint>& points,
                                     const PesOptions& options) {
  std::vector<std::future<PesRecord>> futures;
  futures.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    futures.push_back(std::async(std::launch::async, run_point, std::cref(points[i]),
                                 std::cref(options), static_cast<std::uint64_t>(i)));
  std::vector<PesRecord> records;
  records.reserve(points.size());
  for (auto& fut : futures) records.push_back(fut.get());
  return records;
}

std::string render_results_csv(const std::vector<PesRecord>& records) {
  std::string out =
      "label,R,e_exact_diag,e_exact_ref_hf,e_exact_ref_mr,e_noisy_ref_hf,e_noisy_ref_mr,"
      "e_vqe_hf,e_vqe_mr,e_rem,e_mrem,err_vqe_hf,err_vqe_mr,err_rem,err_mrem,"
      "iters_hf,iters_mr,evals_hf,evals_mr,error\n";
  for (const auto& rec : records) {
    std::vector<std::string> cells;
    cells.push_back(rec.label);
    cells.push_back(fmt(rec.r));
    if (rec.error.empty()) {
      cells.push_back(fmt(rec.e_exact_diag));
      cells.push_back(opt_fmt(rec.hf, &MitigationRecord::e_exact_ref));
      cells.push_back(opt_fmt(rec.mr, &MitigationRecord::e_exact_ref));
      cells.push_back(opt_fmt(rec.hf, &MitigationRecord::e_noisy_ref));
      cells.push_back(opt_fmt(rec.mr, &MitigationRecord::e_noisy_ref));
      cells.push_back(opt_fmt(rec.hf, &MitigationRecord::e_vqe_raw));
      cells.push_back(opt_fmt(rec.mr, &MitigationRecord::e_vqe_raw));
      cells.push_back(opt_fmt(rec.hf, &MitigationRecord::e_mitigated));
      cells.push_back(opt_fmt(rec.mr, &MitigationRecord::e_mitigated));
      cells.push_back(rec.hf ? fmt(std::abs(rec.hf->e_vqe_raw - rec.e_exact_diag)) : "");
      cells.push_back(rec.mr ? fmt(std::abs(rec.mr->e_vqe_raw - rec.e_exact_diag)) : "");
      cells.push_back(rec.hf ? fmt(std::abs(rec.hf->e_mitigated - rec.e_exact_diag)) : "");
      cells.push_back(rec.mr ? fmt(std::abs(rec.mr->e_mitigated - rec.e_exact_diag)) : "");
      cells.push_back(rec.hf ? std::to_string(rec.hf->iterations) : "");
      cells.push_back(rec.mr ? std::to_string(rec.mr->iterations) : "");
      cells.push_back(rec.hf ? std::to_string(rec.hf->evaluations) : "");
      cells.push_back(rec.mr ? std::to_string(rec.mr->evaluations) : "");
      cells.push_back("");
    } else {
      for (int i = 0; i < 17; ++i) cells.push_back("");
      cells.push_back(rec.error);
    }
    for (std::size_t i = 0; i < cells.size(); ++i)
      out += (i ? "," : "") + cells[i];
    out += "\n";
  }
  return out;
}

std::string render_long_csv(const std::vector<PesRecord>& records) {
  std::string out = "point,series,value\n";
  auto row = [&](const std::string& label, const char* series, double value) {
    out += label;
    out += ",";
    out += series;
    out += ",";
    out += fmt(value);
    out += "\n";
  };
  for (const auto& rec : records) {
    if (!rec.error.empty()) continue;
    row(rec.label, "exact", rec.e_exact_diag);
    if (rec.hf) {
      row(rec.label, "vqe_hf", rec.hf->e_vqe_raw);
      row(rec.label, "rem", rec.hf->e_mitigated);
      row(rec.label, "err_vqe_hf", std::abs(rec.hf->e_vqe_raw - rec.e_exact_diag));
      row(rec.label, "err_rem", std::abs(rec.hf->e_mitigated - rec.e_exact_diag));
    }
    if (rec.mr) {
      row(rec.label, "vqe_mr", rec.mr->e_vqe_raw);
      row(rec.label, "mrem", rec.mr->e_mitigated);
      row(rec.label, "err_vqe_mr", std::abs(rec.mr->e_vqe_raw - rec.e_exact_diag));
      row(rec.label, "err_mrem", std::abs(rec.mr->e_mitigated - rec.e_exact_diag));
    }
  }
  return out;
}

}  // namespace mrem
