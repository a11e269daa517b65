#pragma once

#include <cstdint>
#include <vector>

#include "bhwork/drive.hpp"
#include "bhwork/fock.hpp"
#include "bhwork/integrate.hpp"

namespace bhwork {

/// Mean-field amplitudes psi_j for the L sites at a given time.
struct ClassicalField {
  ComplexVector amplitudes;
  double time = 0.0;
  double norm_drift = 0.0;  // relative deviation of sum|psi|^2 for the accepted run
  int accepted_steps = 0;

  /// Conserved total: sum_j |psi_j|^2 = N + L/2 on any trajectory.
  double total_norm() const;
};

/// Mean-field energy sum_bonds[-J(psi_j* psi_k + c.c.)] + (U/2) sum|psi_j|^4
/// with the bond set taken from params.
double classical_energy(const ClassicalField& field, double coupling, const ModelParams& params);

/// Same, evaluated on raw (q, p) phase-space coordinates psi_j = q_j + i p_j.
double classical_energy(const ComplexVector& amplitudes, double coupling,
                        const ModelParams& params);

/// Integrate the mean-field equations of motion to t = tau with step-doubling
/// control on the conserved total norm.
ClassicalField evolve_classical(const ClassicalField& initial, const DriveProtocol& protocol,
                                const ModelParams& params, const IntegratorConfig& cfg);

/// Single run at a fixed step count, verifying the conservation drift against
/// the tolerance but skipping the step-doubling comparison. Used by scans that
/// have already calibrated the step count on representative trajectories.
ClassicalField evolve_classical_fixed_steps(const ClassicalField& initial,
                                            const DriveProtocol& protocol,
                                            const ModelParams& params, int steps,
                                            double norm_tolerance);

/// Field snapshots at the requested times (each in [0, tau]), computed at a
/// fixed step count per segment.
std::vector<ClassicalField> evolve_classical_path(const ClassicalField& initial,
                                                  const DriveProtocol& protocol,
                                                  const ModelParams& params, int steps,
                                                  const std::vector<double>& times);

enum class PhasePolicy { AllRandom, FirstFixedZero };

/// Specification of the classical counterpart of one Fock state: fixed
/// moduli |psi_j| = sqrt(n_j + 1/2) and independent uniform phases.
struct ClassicalInitialEnsemble {
  FockState occupations;
  PhasePolicy phase_policy = PhasePolicy::AllRandom;
  long long sample_count = 100000;
  std::uint64_t master_seed = 0;

  void validate() const;
};

/// Deterministic sample k of the ensemble stream. Any sample may be generated
/// on any worker; identical (master_seed, k) give bit-identical fields.
ClassicalField sample_initial_field(const ClassicalInitialEnsemble& ensemble, long long k);

}  // namespace bhwork
