#include "bhwork/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace bhwork {

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Quantum: return "quantum";
    case Provenance::ClassicalMc: return "classical-mc";
    case Provenance::ClassicalShoot: return "classical-shoot";
  }
  return "unknown";
}

double QuantumState::norm_squared() const {
  double s = 0.0;
  for (const Complex& c : coefficients) s += std::norm(c);
  return s;
}

QuantumState make_fock_state(const FockBasis& basis, const FockState& occupations) {
  QuantumState state;
  state.basis = basis;
  state.coefficients.assign(basis.size(), Complex{0.0, 0.0});
  state.coefficients[basis.index_of(occupations)] = Complex{1.0, 0.0};
  return state;
}

ComplexVector integrate_coefficients(const SparseHamiltonian& h, const DriveProtocol& protocol,
                                     double hbar, const ComplexVector& c0,
                                     const IntegratorConfig& cfg, double* drift_out,
                                     int* steps_out) {
  protocol.validate();
  if (c0.size() != h.dim())
    throw std::invalid_argument("integrate_coefficients: coefficient length mismatch");

  double norm0 = 0.0;
  for (const Complex& c : c0) norm0 += std::norm(c);
  if (norm0 <= 0.0) throw std::invalid_argument("integrate_coefficients: zero initial vector");

  // i hbar dc/dt = H(J(t)) c  ->  dc/dt = (-i/hbar) H c
  const Complex minus_i_over_hbar{0.0, -1.0 / hbar};
  auto rhs_at = [&h, minus_i_over_hbar](double coupling, const ComplexVector& v,
                                        ComplexVector& dv) {
    h.apply(coupling, v, dv);
    for (Complex& x : dv) x *= minus_i_over_hbar;
  };
  auto run = [&](int steps) { return run_driven(rhs_at, protocol, c0, steps); };
  auto drift_of = [norm0](const ComplexVector& y) {
    double s = 0.0;
    for (const Complex& c : y) s += std::norm(c);
    return std::abs(s - norm0) / norm0;
  };

  RefinedSolution sol = integrate_refined(run, cfg, drift_of, "quantum propagation");
  if (drift_out) *drift_out = sol.drift;
  if (steps_out) *steps_out = sol.steps;
  return std::move(sol.state);
}

QuantumState evolve_quantum(const QuantumState& initial, const DriveProtocol& protocol,
                            const SparseHamiltonian& h, const IntegratorConfig& cfg) {
  QuantumState out;
  out.basis = initial.basis;
  out.time = initial.time + protocol.duration;
  out.coefficients = integrate_coefficients(h, protocol, initial.basis.params().hbar,
                                            initial.coefficients, cfg, &out.norm_drift,
                                            &out.accepted_steps);
  // Renormalize for reporting only; the raw drift stays recorded.
  double norm = std::sqrt(out.norm_squared());
  for (Complex& c : out.coefficients) c /= norm;
  return out;
}

TransitionDistribution quantum_transition_probs(const FockState& initial,
                                                const DriveProtocol& protocol,
                                                const ModelParams& params,
                                                const IntegratorConfig& cfg) {
  const FockBasis basis = build_basis(params);
  const SparseHamiltonian h = build_hamiltonian(basis);
  const QuantumState final_state =
      evolve_quantum(make_fock_state(basis, initial), protocol, h, cfg);

  TransitionDistribution dist;
  dist.basis = basis;
  dist.initial = initial;
  dist.provenance = Provenance::Quantum;
  dist.probabilities.resize(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    dist.probabilities[k] = std::norm(final_state.coefficients[k]);
  return dist;
}

std::vector<TransitionDistribution> quantum_transition_matrix(const FockBasis& basis,
                                                              const DriveProtocol& protocol,
                                                              const IntegratorConfig& cfg) {
  const SparseHamiltonian h = build_hamiltonian(basis);
  std::vector<TransitionDistribution> rows;
  rows.reserve(basis.size());
  for (std::size_t m = 0; m < basis.size(); ++m) {
    const QuantumState final_state =
        evolve_quantum(make_fock_state(basis, basis.state(m)), protocol, h, cfg);
    TransitionDistribution dist;
    dist.basis = basis;
    dist.initial = basis.state(m);
    dist.provenance = Provenance::Quantum;
    dist.probabilities.resize(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k)
      dist.probabilities[k] = std::norm(final_state.coefficients[k]);
    rows.push_back(std::move(dist));
  }
  return rows;
}

}  // namespace bhwork
