#include "config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "bhwork/errors.hpp"

namespace bhwork::cli {

using nlohmann::json;

ModelParams ExperimentConfig::model_for(int n) const {
  ModelParams p;
  p.sites = sites;
  p.bosons = n;
  p.interaction = interaction_for(n);
  if (boundary == "auto")
    p.boundary = sites >= 3 ? Boundary::Periodic : Boundary::Open;
  else if (boundary == "open")
    p.boundary = Boundary::Open;
  else if (boundary == "periodic")
    p.boundary = Boundary::Periodic;
  else
    throw ConfigError("model.boundary must be auto, open, or periodic");
  p.validate();
  return p;
}

DriveProtocol ExperimentConfig::protocol() const {
  if (shape != "parabolic") throw ConfigError("protocol.shape must be parabolic");
  DriveProtocol p = DriveProtocol::parabolic(j0, tau);
  p.validate();
  return p;
}

namespace {

const std::set<std::string> kKnownMethods = {"quantum", "classical-mc", "classical-shoot"};

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  ExperimentConfig cfg;

  if (j.contains("model")) {
    const json& m = j.at("model");
    cfg.sites = get_or(m, "sites", cfg.sites);
    cfg.bosons = get_or(m, "bosons", cfg.bosons);
    cfg.boundary = get_or<std::string>(m, "boundary", cfg.boundary);
    if (m.contains("interaction")) {
      const json& u = m.at("interaction");
      if (u.is_string()) {
        if (u.get<std::string>() != "five-over-N")
          throw ConfigError("model.interaction must be a number or \"five-over-N\"");
        cfg.u_five_over_n = true;
      } else if (u.is_number()) {
        cfg.u_five_over_n = false;
        cfg.u_fixed = u.get<double>();
      } else {
        throw ConfigError("model.interaction must be a number or \"five-over-N\"");
      }
    }
  }
  if (j.contains("protocol")) {
    const json& p = j.at("protocol");
    cfg.j0 = get_or(p, "amplitude", cfg.j0);
    cfg.tau = get_or(p, "duration", cfg.tau);
    cfg.shape = get_or<std::string>(p, "shape", cfg.shape);
  }
  if (j.contains("initial")) {
    const json& i = j.at("initial");
    if (i.contains("occupations"))
      cfg.initial_occupations = i.at("occupations").get<FockState>();
    if (i.contains("beta")) {
      const json& b = i.at("beta");
      if (b.is_string()) {
        if (b.get<std::string>() != "ground-state")
          throw ConfigError("initial.beta must be a number or \"ground-state\"");
        cfg.beta_ground = true;
      } else if (b.is_number()) {
        cfg.beta = b.get<double>();
      } else {
        throw ConfigError("initial.beta must be a number or \"ground-state\"");
      }
    }
  }
  if (j.contains("methods")) {
    cfg.methods = j.at("methods").get<std::vector<std::string>>();
    for (const auto& m : cfg.methods)
      if (!kKnownMethods.count(m)) throw ConfigError("unknown method '" + m + "'");
  }
  cfg.samples = get_or(j, "samples", cfg.samples);
  cfg.seed = get_or(j, "seed", cfg.seed);
  cfg.threads = get_or(j, "threads", cfg.threads);
  cfg.output_dir = get_or<std::string>(j, "output_dir", cfg.output_dir);
  if (j.contains("integrator")) {
    const json& g = j.at("integrator");
    cfg.integrator.base_steps = get_or(g, "base_steps", cfg.integrator.base_steps);
    cfg.integrator.norm_tolerance = get_or(g, "norm_tolerance", cfg.integrator.norm_tolerance);
    cfg.integrator.max_refinements = get_or(g, "max_refinements", cfg.integrator.max_refinements);
  }
  if (j.contains("shooting")) {
    const json& s = j.at("shooting");
    cfg.shooting.scan_resolution = get_or(s, "scan_resolution", cfg.shooting.scan_resolution);
    cfg.shooting.scan_resolution_3site =
        get_or(s, "scan_resolution_3site", cfg.shooting.scan_resolution_3site);
    cfg.shooting.root_tolerance = get_or(s, "root_tolerance", cfg.shooting.root_tolerance);
    cfg.shooting.fd_step = get_or(s, "fd_step", cfg.shooting.fd_step);
    cfg.shooting.max_newton_iters = get_or(s, "max_newton_iters", cfg.shooting.max_newton_iters);
  }
  if (j.contains("spectrum")) {
    const json& s = j.at("spectrum");
    cfg.j_min = get_or(s, "j_min", cfg.j_min);
    cfg.j_max = get_or(s, "j_max", cfg.j_max);
    cfg.j_points = get_or(s, "j_points", cfg.j_points);
  }
  if (j.contains("converge"))
    cfg.n_values = get_or(j.at("converge"), "n_values", cfg.n_values);
  if (j.contains("dos")) {
    const json& d = j.at("dos");
    cfg.dos_coupling = get_or(d, "coupling", cfg.dos_coupling);
    cfg.dos_bins = get_or(d, "bins", cfg.dos_bins);
    cfg.dos_samples = get_or(d, "samples", cfg.dos_samples);
  }
  if (j.contains("workdist"))
    cfg.workdist_classical = get_or(j.at("workdist"), "classical", cfg.workdist_classical);
  if (j.contains("trajectory_dump")) {
    const json& t = j.at("trajectory_dump");
    cfg.dump_times = get_or(t, "times", cfg.dump_times);
    cfg.dump_samples = get_or(t, "samples", cfg.dump_samples);
    if (cfg.dump_samples < 0) throw ConfigError("trajectory_dump.samples must be >= 0");
  }

  if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
  if (cfg.j_points < 1) throw ConfigError("spectrum.j_points must be >= 1");
  return cfg;
}

json serialize_config(const ExperimentConfig& cfg) {
  json j;
  j["model"]["sites"] = cfg.sites;
  j["model"]["bosons"] = cfg.bosons;
  if (cfg.u_five_over_n)
    j["model"]["interaction"] = "five-over-N";
  else
    j["model"]["interaction"] = cfg.u_fixed;
  j["model"]["boundary"] = cfg.boundary;
  j["protocol"]["amplitude"] = cfg.j0;
  j["protocol"]["duration"] = cfg.tau;
  j["protocol"]["shape"] = cfg.shape;
  if (cfg.initial_occupations) j["initial"]["occupations"] = *cfg.initial_occupations;
  if (cfg.beta_ground)
    j["initial"]["beta"] = "ground-state";
  else if (cfg.beta)
    j["initial"]["beta"] = *cfg.beta;
  j["methods"] = cfg.methods;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["output_dir"] = cfg.output_dir;
  j["integrator"]["base_steps"] = cfg.integrator.base_steps;
  j["integrator"]["norm_tolerance"] = cfg.integrator.norm_tolerance;
  j["integrator"]["max_refinements"] = cfg.integrator.max_refinements;
  j["shooting"]["scan_resolution"] = cfg.shooting.scan_resolution;
  j["shooting"]["scan_resolution_3site"] = cfg.shooting.scan_resolution_3site;
  j["shooting"]["root_tolerance"] = cfg.shooting.root_tolerance;
  j["shooting"]["fd_step"] = cfg.shooting.fd_step;
  j["shooting"]["max_newton_iters"] = cfg.shooting.max_newton_iters;
  j["spectrum"]["j_min"] = cfg.j_min;
  j["spectrum"]["j_max"] = cfg.j_max;
  j["spectrum"]["j_points"] = cfg.j_points;
  j["converge"]["n_values"] = cfg.n_values;
  j["dos"]["coupling"] = cfg.dos_coupling;
  j["dos"]["bins"] = cfg.dos_bins;
  j["dos"]["samples"] = cfg.dos_samples;
  j["workdist"]["classical"] = cfg.workdist_classical;
  if (cfg.dump_samples > 0) {
    j["trajectory_dump"]["times"] = cfg.dump_times;
    j["trajectory_dump"]["samples"] = cfg.dump_samples;
  }
  return j;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace bhwork::cli
