#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <set>

#include <nlohmann/json.hpp>

#include "bhwork/classical_prob.hpp"
#include "bhwork/csv.hpp"
#include "bhwork/errors.hpp"
#include "bhwork/quantum.hpp"
#include "bhwork/rng.hpp"
#include "bhwork/work_stats.hpp"

namespace bhwork::cli {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string transition_csv(const TransitionDistribution& dist) {
  const bool classical = dist.provenance != Provenance::Quantum;
  CsvBuilder csv(classical ? "final_state_index,occupations,probability,std_error,provenance,flags"
                           : "final_state_index,occupations,probability,provenance");
  const std::string prov = provenance_name(dist.provenance);
  for (std::size_t k = 0; k < dist.probabilities.size(); ++k) {
    const std::string occ = occupations_label(dist.basis.state(k));
    if (classical) {
      const double se = dist.std_error.empty() ? 0.0 : dist.std_error[k];
      const std::string flag =
          (!dist.flags.empty() && dist.flags[k] != kBinOk) ? "caustic-uncertain" : "";
      csv.row(k, occ, dist.probabilities[k], se, prov, flag);
    } else {
      csv.row(k, occ, dist.probabilities[k], prov);
    }
  }
  return csv.body();
}

std::string workdist_csv(const WorkDistribution& dist) {
  CsvBuilder csv("W,probability,provenance");
  const std::string prov =
      dist.provenance == Provenance::Quantum ? "quantum" : "classical";
  for (const WorkPoint& p : dist.support) csv.row(p.work, p.probability, prov);
  return csv.body();
}

ClassicalInitialEnsemble ensemble_for(const ExperimentConfig& cfg, const FockState& occ,
                                      std::uint64_t seed) {
  ClassicalInitialEnsemble ens;
  ens.occupations = occ;
  ens.phase_policy = PhasePolicy::AllRandom;
  ens.sample_count = cfg.samples;
  ens.master_seed = seed;
  return ens;
}

FockState require_initial(const ExperimentConfig& cfg) {
  if (!cfg.initial_occupations)
    throw ConfigError("this command needs initial.occupations in the config");
  return *cfg.initial_occupations;
}

}  // namespace

std::vector<Artifact> build_spectrum(const ExperimentConfig& cfg) {
  const ModelParams params = cfg.model();
  const FockBasis basis = build_basis(params);
  const SparseHamiltonian h = build_hamiltonian(basis);
  if (cfg.j_max < cfg.j_min) throw ConfigError("spectrum: j_max must be >= j_min");

  CsvBuilder csv("J,level_index,energy");
  for (int gi = 0; gi < cfg.j_points; ++gi) {
    const double coupling =
        cfg.j_points == 1
            ? cfg.j_min
            : cfg.j_min + (cfg.j_max - cfg.j_min) * gi / (cfg.j_points - 1);
    const std::vector<double> levels = dense_spectrum(h, coupling);
    for (std::size_t k = 0; k < levels.size(); ++k)
      csv.row(coupling, k, levels[k]);
  }
  return {{"spectrum.csv", csv.body()}};
}

std::vector<Artifact> build_transition(const ExperimentConfig& cfg,
                                       std::exception_ptr* method_error) {
  const ModelParams params = cfg.model();
  const FockState initial = require_initial(cfg);
  std::vector<Artifact> files;
  json status;
  std::exception_ptr first_error;

  for (const std::string& method : cfg.methods) {
    try {
      if (method == "quantum") {
        const TransitionDistribution dist =
            quantum_transition_probs(initial, cfg.protocol(), params, cfg.integrator);
        files.push_back({"transition_quantum.csv", transition_csv(dist)});
      } else if (method == "classical-mc") {
        const TransitionDistribution dist =
            classical_transition_mc(ensemble_for(cfg, initial, cfg.seed), cfg.protocol(),
                                    params, cfg.integrator, cfg.threads);
        files.push_back({"transition_classical-mc.csv", transition_csv(dist)});
        status["classical-mc"]["leakage_fraction"] = dist.leakage_fraction;
        if (dist.leakage_warning) status["classical-mc"]["warning"] = "leakage above 1%";
      } else if (method == "classical-shoot") {
        const ShootReport report = classical_shoot_report(initial, cfg.protocol(), params,
                                                          cfg.shooting, cfg.integrator,
                                                          cfg.threads);
        files.push_back({"transition_classical-shoot.csv", transition_csv(report.distribution)});
        CsvBuilder diag("target,root_phases,derivative_or_det,weight,caustic_flag");
        for (const ShootDiagRow& row : report.diagnostics) {
          std::string phases;
          for (std::size_t i = 0; i < row.phases.size(); ++i) {
            if (i) phases += '|';
            phases += format_full(row.phases[i]);
          }
          diag.row(occupations_label(row.target), phases, row.derivative_or_det, row.weight,
                   row.caustic ? 1 : 0);
        }
        files.push_back({"shoot_diagnostics.csv", diag.body()});
        status["classical-shoot"]["trajectory_count"] = report.distribution.trajectory_count;
      } else {
        throw ConfigError("unknown method '" + method + "'");
      }
      status[method]["ok"] = true;
    } catch (const std::exception& e) {
      status[method]["ok"] = false;
      status[method]["error"] = e.what();
      if (!first_error) first_error = std::current_exception();
    }
  }

  if (cfg.dump_samples > 0 && !cfg.dump_times.empty()) {
    try {
      ClassicalInitialEnsemble ens = ensemble_for(cfg, initial, cfg.seed);
      // One refined trajectory fixes the step count for the snapshot runs.
      const ClassicalField probe =
          evolve_classical(sample_initial_field(ens, 0), cfg.protocol(), params, cfg.integrator);
      CsvBuilder dump("sample_id,t,site,re_psi,im_psi");
      for (long long k = 0; k < cfg.dump_samples; ++k) {
        const auto path = evolve_classical_path(sample_initial_field(ens, k), cfg.protocol(),
                                                params, probe.accepted_steps, cfg.dump_times);
        for (const ClassicalField& snap : path)
          for (std::size_t j = 0; j < snap.amplitudes.size(); ++j)
            dump.row(k, snap.time, j, snap.amplitudes[j].real(), snap.amplitudes[j].imag());
      }
      files.push_back({"trajectories.csv", dump.body()});
      status["trajectory_dump"]["ok"] = true;
    } catch (const std::exception& e) {
      status["trajectory_dump"]["ok"] = false;
      status["trajectory_dump"]["error"] = e.what();
      if (!first_error) first_error = std::current_exception();
    }
  }

  files.push_back({"status.json", status.dump(2) + "\n"});
  if (method_error)
    *method_error = first_error;
  else if (first_error)
    std::rethrow_exception(first_error);
  return files;
}

std::vector<Artifact> build_converge(const ExperimentConfig& cfg,
                                     std::vector<std::string>* notes) {
  if (cfg.sites != 2) throw ConfigError("converge: two-site model required");
  if (cfg.n_values.empty()) throw ConfigError("converge: n_values must be nonempty");

  std::vector<int> n_values;
  std::set<int> seen;
  for (int n : cfg.n_values) {
    if (n < 2 || n % 2 != 0)
      throw ConfigError("converge: particle numbers must be even and >= 2, got " +
                        std::to_string(n));
    if (!seen.insert(n).second) {
      if (notes) notes->push_back("duplicate N=" + std::to_string(n) + " ignored");
      continue;
    }
    n_values.push_back(n);
  }

  std::vector<Artifact> files;
  CsvBuilder sweep("N,R");
  for (int n : n_values) {
    const ModelParams params = cfg.model_for(n);
    const FockState initial = {n / 2, n / 2};
    const TransitionDistribution quantum =
        quantum_transition_probs(initial, cfg.protocol(), params, cfg.integrator);
    // Per-N substream so sweeps decorrelate while staying reproducible.
    const std::uint64_t seed_n = sample_seed(cfg.seed, static_cast<std::uint64_t>(n));
    const TransitionDistribution classical =
        classical_transition_mc(ensemble_for(cfg, initial, seed_n), cfg.protocol(), params,
                                cfg.integrator, cfg.threads);
    const double r = rmse(cumulative(quantum), cumulative(classical));
    sweep.row(n, r);
    files.push_back({"transition_quantum_N" + std::to_string(n) + ".csv",
                     transition_csv(quantum)});
    files.push_back({"transition_classical-mc_N" + std::to_string(n) + ".csv",
                     transition_csv(classical)});
  }
  files.push_back({"rmse.csv", sweep.body()});
  return files;
}

std::vector<Artifact> build_workdist(const ExperimentConfig& cfg, std::string* diagnostics_json) {
  const ModelParams params = cfg.model();
  const FockBasis basis = build_basis(params);
  if (!cfg.initial_occupations && !cfg.beta && !cfg.beta_ground)
    throw ConfigError("workdist: give initial.occupations or initial.beta");

  // Endpoint spectra: the drive vanishes at both ends, so both are the
  // interaction energies of the Fock states.
  std::vector<double> energies(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    energies[k] = interaction_energy(basis.state(k), params.interaction);

  json diag;
  InitialDistribution initial;
  if (cfg.initial_occupations) {
    initial.provenance = InitialProvenance::Deterministic;
    initial.probabilities.assign(basis.size(), 0.0);
    initial.probabilities[basis.index_of(*cfg.initial_occupations)] = 1.0;
  } else {
    const Beta beta = cfg.beta_ground ? Beta::ground() : Beta::finite(*cfg.beta);
    initial = gibbs_initial(energies, beta);
  }

  // Drop numerically irrelevant thermal weights so only meaningful rows are
  // propagated; the dropped mass is recorded.
  double dropped = 0.0;
  double max_w = *std::max_element(initial.probabilities.begin(), initial.probabilities.end());
  for (double& p : initial.probabilities) {
    if (p > 0.0 && p < 1e-14 * max_w) {
      dropped += p;
      p = 0.0;
    }
  }
  diag["dropped_initial_mass"] = dropped;

  std::vector<Artifact> files;
  std::vector<TransitionDistribution> quantum_rows(basis.size());
  for (std::size_t m = 0; m < basis.size(); ++m) {
    if (initial.probabilities[m] <= 0.0) continue;
    quantum_rows[m] =
        quantum_transition_probs(basis.state(m), cfg.protocol(), params, cfg.integrator);
  }
  WorkDistribution quantum = assemble_work_distribution(initial, quantum_rows, energies, energies);
  if (cfg.beta) {
    quantum.beta = Beta::finite(*cfg.beta);
    diag["jarzynski_quantum"] = exp_beta_work(quantum, *cfg.beta);
  } else if (cfg.beta_ground) {
    quantum.beta = Beta::ground();
  }
  diag["mean_work_quantum"] = mean_work(quantum);
  files.push_back({"workdist_quantum.csv", workdist_csv(quantum)});

  if (cfg.workdist_classical) {
    std::vector<TransitionDistribution> classical_rows(basis.size());
    for (std::size_t m = 0; m < basis.size(); ++m) {
      if (initial.probabilities[m] <= 0.0) continue;
      const std::uint64_t seed_m = sample_seed(cfg.seed, static_cast<std::uint64_t>(m));
      classical_rows[m] =
          classical_transition_mc(ensemble_for(cfg, basis.state(m), seed_m), cfg.protocol(),
                                  params, cfg.integrator, cfg.threads);
    }
    InitialDistribution classical_initial_dist = initial;
    if (!cfg.initial_occupations) {
      const WeylDosEstimate dos = weyl_dos_mc(params, 0.0, cfg.dos_bins, cfg.dos_samples,
                                              sample_seed(cfg.seed, 0x0d05ull), cfg.threads);
      const Beta beta = cfg.beta_ground ? Beta::ground() : Beta::finite(*cfg.beta);
      classical_initial_dist =
          classical_initial(dos, energies, beta, weyl_energy_offset(params));
      for (std::size_t m = 0; m < basis.size(); ++m)
        if (initial.probabilities[m] <= 0.0) classical_initial_dist.probabilities[m] = 0.0;
    }
    WorkDistribution classical =
        assemble_work_distribution(classical_initial_dist, classical_rows, energies, energies);
    if (cfg.beta) {
      classical.beta = Beta::finite(*cfg.beta);
      diag["jarzynski_classical"] = exp_beta_work(classical, *cfg.beta);
    }
    files.push_back({"workdist_classical.csv", workdist_csv(classical)});
  }

  if (diagnostics_json) *diagnostics_json = diag.dump(2);
  return files;
}

std::vector<Artifact> build_dos(const ExperimentConfig& cfg, std::string* diagnostics_json) {
  const ModelParams params = cfg.model();
  const WeylDosEstimate dos = weyl_dos_mc(params, cfg.dos_coupling, cfg.dos_bins,
                                          cfg.dos_samples, cfg.seed, cfg.threads);
  CsvBuilder csv("E,density,std_error");
  for (int i = 0; i < dos.bins(); ++i)
    csv.row(dos.bin_center(i), dos.density[i], dos.std_error[i]);
  if (diagnostics_json) {
    json diag;
    diag["total_integral"] = dos.total_integral();
    diag["closed_form_normalization"] = weyl_dos_normalization(params);
    diag["samples"] = dos.samples;
    *diagnostics_json = diag.dump(2);
  }
  return {{"dos.csv", csv.body()}};
}

std::vector<std::string> run_command(const std::string& command, const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Artifact> files;
  std::string extra;
  std::vector<std::string> notes;
  std::exception_ptr pending;

  try {
    if (command == "spectrum") {
      files = build_spectrum(cfg);
    } else if (command == "transition") {
      files = build_transition(cfg, &pending);
    } else if (command == "converge") {
      files = build_converge(cfg, &notes);
    } else if (command == "workdist") {
      files = build_workdist(cfg, &extra);
    } else if (command == "dos") {
      files = build_dos(cfg, &extra);
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
  } catch (...) {
    pending = std::current_exception();
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const json cfg_json = serialize_config(cfg);
  const std::string cfg_text = cfg_json.dump();

  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  std::vector<std::string> written;
  for (const Artifact& artifact : files) {
    const fs::path path = fs::path(cfg.output_dir) / artifact.filename;
    write_text_file(path, artifact.body);
    written.push_back(path.string());

    json sidecar;
    sidecar["command"] = command;
    sidecar["version"] = kVersion;
    sidecar["seed"] = cfg.seed;
    sidecar["threads"] = cfg.threads;
    sidecar["config"] = cfg_json;
    sidecar["config_fingerprint"] = fingerprint(cfg_text);
    sidecar["wall_time_seconds"] = wall;
    if (!extra.empty()) sidecar["diagnostics"] = json::parse(extra);
    if (!notes.empty()) sidecar["notes"] = notes;
    const fs::path meta = path.string() + ".meta.json";
    write_text_file(meta, sidecar.dump(2) + "\n");
    written.push_back(meta.string());
  }
  for (const std::string& note : notes) std::cerr << "warning: " << note << "\n";
  if (pending) std::rethrow_exception(pending);
  return written;
}

}  // namespace bhwork::cli
