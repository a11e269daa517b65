#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bhwork/classical_prob.hpp"
#include "bhwork/drive.hpp"
#include "bhwork/fock.hpp"

namespace bhwork::cli {

/// One experiment = one config file. Scalar fields can be overridden from
/// the command line (--seed, --out, --threads).
struct ExperimentConfig {
  // model
  int sites = 2;
  int bosons = 100;
  bool u_five_over_n = true;  // U = 5/N per run
  double u_fixed = 0.0;
  std::string boundary = "auto";  // auto | open | periodic

  // protocol
  double j0 = 5.0;
  double tau = 10.0;
  std::string shape = "parabolic";

  // initial state: occupations, or a thermal beta (number or "ground-state")
  std::optional<FockState> initial_occupations;
  std::optional<double> beta;
  bool beta_ground = false;

  std::vector<std::string> methods = {"quantum", "classical-mc"};
  long long samples = 100000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  IntegratorConfig integrator;
  ShootingConfig shooting;
  std::string output_dir = "out";

  // spectrum command
  double j_min = 0.0;
  double j_max = 5.0;
  int j_points = 101;

  // converge command
  std::vector<int> n_values = {10, 50, 100, 200};

  // dos command
  double dos_coupling = 0.0;
  int dos_bins = 512;
  long long dos_samples = 1000000;

  // workdist command
  bool workdist_classical = false;

  // optional trajectory dump (transition command)
  std::vector<double> dump_times;
  long long dump_samples = 0;

  double interaction_for(int n) const { return u_five_over_n ? 5.0 / n : u_fixed; }
  ModelParams model() const { return model_for(bosons); }
  ModelParams model_for(int n) const;
  DriveProtocol protocol() const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json serialize_config(const ExperimentConfig& cfg);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace bhwork::cli
