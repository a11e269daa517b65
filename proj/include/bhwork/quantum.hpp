#pragma once

#include <complex>
#include <vector>

#include "bhwork/drive.hpp"
#include "bhwork/fock.hpp"
#include "bhwork/integrate.hpp"
#include "bhwork/transition.hpp"

namespace bhwork {

/// Coefficient vector over a Fock basis at a given time.
struct QuantumState {
  FockBasis basis;
  ComplexVector coefficients;
  double time = 0.0;
  double norm_drift = 0.0;  // |sum|c|^2 - 1| of the accepted raw integration
  int accepted_steps = 0;

  double norm_squared() const;
};

/// Basis state |occupations> as a unit coefficient vector.
QuantumState make_fock_state(const FockBasis& basis, const FockState& occupations);

/// Raw linear propagation of a coefficient vector under the driven
/// Hamiltonian. No normalization is applied, so the map is exactly linear in
/// the initial coefficients. Drift is measured relative to the initial norm.
ComplexVector integrate_coefficients(const SparseHamiltonian& h, const DriveProtocol& protocol,
                                     double hbar, const ComplexVector& c0,
                                     const IntegratorConfig& cfg, double* drift_out = nullptr,
                                     int* steps_out = nullptr);

/// Propagate to t = tau with step-doubling control. The returned state is
/// renormalized for reporting; the raw drift is kept in norm_drift.
QuantumState evolve_quantum(const QuantumState& initial, const DriveProtocol& protocol,
                            const SparseHamiltonian& h, const IntegratorConfig& cfg);

/// |c_n(tau)|^2 over all final Fock states for one initial Fock state.
TransitionDistribution quantum_transition_probs(const FockState& initial,
                                                const DriveProtocol& protocol,
                                                const ModelParams& params,
                                                const IntegratorConfig& cfg);

/// Full transition matrix rows for every initial basis state (row index =
/// initial state index). Used by thermal work distributions.
std::vector<TransitionDistribution> quantum_transition_matrix(const FockBasis& basis,
                                                              const DriveProtocol& protocol,
                                                              const IntegratorConfig& cfg);

}  // namespace bhwork
