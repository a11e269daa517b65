#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace bhwork::cli {

/// One output file: name relative to the output directory plus its body.
/// Bodies are built deterministically from (config, seed) so repeated runs
/// are byte-identical.
struct Artifact {
  std::string filename;
  std::string body;
};

std::vector<Artifact> build_spectrum(const ExperimentConfig& cfg);

/// Runs every requested method; failures are recorded in the status manifest
/// (and in *method_error for the caller to propagate) while the results of
/// the methods that succeeded are still returned.
std::vector<Artifact> build_transition(const ExperimentConfig& cfg,
                                       std::exception_ptr* method_error = nullptr);
std::vector<Artifact> build_converge(const ExperimentConfig& cfg, std::vector<std::string>* notes);
std::vector<Artifact> build_workdist(const ExperimentConfig& cfg, std::string* diagnostics_json);
std::vector<Artifact> build_dos(const ExperimentConfig& cfg, std::string* diagnostics_json);

/// Run one subcommand end to end: build artifacts, write them under
/// cfg.output_dir with a JSON sidecar per file. Returns the written paths.
std::vector<std::string> run_command(const std::string& command, const ExperimentConfig& cfg);

}  // namespace bhwork::cli
