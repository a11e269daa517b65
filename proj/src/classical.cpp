#include "bhwork/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bhwork/errors.hpp"
#include "bhwork/rng.hpp"

namespace bhwork {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// dpsi_j/dt = (-i/hbar) * [ -J (psi_{j+1} + psi_{j-1}) + U |psi_j|^2 psi_j ]
// with the neighbor sum restricted to existing bonds.
struct DnlsRhs {
  const ModelParams* params;
  std::vector<std::pair<int, int>> bonds;

  explicit DnlsRhs(const ModelParams& p) : params(&p), bonds(p.bonds()) {}

  void operator()(double coupling, const ComplexVector& psi, ComplexVector& dpsi) const {
    const double u = params->interaction;
    const Complex minus_i_over_hbar{0.0, -1.0 / params->hbar};
    for (std::size_t j = 0; j < psi.size(); ++j)
      dpsi[j] = u * std::norm(psi[j]) * psi[j];
    for (auto [a, b] : bonds) {
      dpsi[a] -= coupling * psi[b];
      dpsi[b] -= coupling * psi[a];
    }
    for (Complex& x : dpsi) x *= minus_i_over_hbar;
  }
};

}  // namespace

double ClassicalField::total_norm() const {
  double s = 0.0;
  for (const Complex& a : amplitudes) s += std::norm(a);
  return s;
}

double classical_energy(const ComplexVector& amplitudes, double coupling,
                        const ModelParams& params) {
  double energy = 0.0;
  for (const Complex& a : amplitudes) {
    const double n = std::norm(a);
    energy += 0.5 * params.interaction * n * n;
  }
  for (auto [a, b] : params.bonds())
    energy -= 2.0 * coupling * (std::conj(amplitudes[a]) * amplitudes[b]).real();
  return energy;
}

double classical_energy(const ClassicalField& field, double coupling, const ModelParams& params) {
  return classical_energy(field.amplitudes, coupling, params);
}

ClassicalField evolve_classical(const ClassicalField& initial, const DriveProtocol& protocol,
                                const ModelParams& params, const IntegratorConfig& cfg) {
  protocol.validate();
  if (static_cast<int>(initial.amplitudes.size()) != params.sites)
    throw std::invalid_argument("evolve_classical: field length != sites");

  const DnlsRhs rhs_at(params);
  const double norm0 = initial.total_norm();
  auto run = [&](int steps) { return run_driven(rhs_at, protocol, initial.amplitudes, steps); };
  auto drift_of = [norm0](const ComplexVector& y) {
    double s = 0.0;
    for (const Complex& c : y) s += std::norm(c);
    return std::abs(s - norm0) / norm0;
  };

  RefinedSolution sol =
      integrate_refined(run, cfg, drift_of, "classical trajectory", std::sqrt(norm0));
  ClassicalField out;
  out.amplitudes = std::move(sol.state);
  out.time = initial.time + protocol.duration;
  out.norm_drift = sol.drift;
  out.accepted_steps = sol.steps;
  return out;
}

ClassicalField evolve_classical_fixed_steps(const ClassicalField& initial,
                                            const DriveProtocol& protocol,
                                            const ModelParams& params, int steps,
                                            double norm_tolerance) {
  const DnlsRhs rhs_at(params);
  const double norm0 = initial.total_norm();
  ComplexVector y = run_driven(rhs_at, protocol, initial.amplitudes, steps);
  double s = 0.0;
  for (const Complex& c : y) s += std::norm(c);
  const double drift = std::abs(s - norm0) / norm0;
  if (!(drift < norm_tolerance))
    throw ConvergenceError("classical trajectory: norm drift " + std::to_string(drift) +
                               " above tolerance at fixed step count",
                           drift);
  ClassicalField out;
  out.amplitudes = std::move(y);
  out.time = initial.time + protocol.duration;
  out.norm_drift = drift;
  out.accepted_steps = steps;
  return out;
}

std::vector<ClassicalField> evolve_classical_path(const ClassicalField& initial,
                                                  const DriveProtocol& protocol,
                                                  const ModelParams& params, int steps,
                                                  const std::vector<double>& times) {
  const DnlsRhs rhs_at(params);
  std::vector<double> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  std::vector<ClassicalField> out;
  ComplexVector y = initial.amplitudes;
  double t_prev = 0.0;
  auto rhs = [&rhs_at, &protocol](double t, const ComplexVector& v, ComplexVector& dv) {
    rhs_at(protocol.value_at(t), v, dv);
  };
  for (double t : sorted) {
    if (t < 0.0 || t > protocol.duration)
      throw std::invalid_argument("evolve_classical_path: time outside [0, tau]");
    if (t > t_prev) {
      const int seg_steps =
          std::max(1, static_cast<int>(std::ceil(steps * (t - t_prev) / protocol.duration)));
      rk4_fixed(rhs, y, t_prev, t, seg_steps);
      t_prev = t;
    }
    ClassicalField snap;
    snap.amplitudes = y;
    snap.time = t;
    out.push_back(std::move(snap));
  }
  return out;
}

void ClassicalInitialEnsemble::validate() const {
  if (occupations.empty()) throw ConfigError("ensemble: occupations missing");
  for (int n : occupations)
    if (n < 0) throw ConfigError("ensemble: negative occupation");
  if (sample_count < 1) throw ConfigError("ensemble: sample_count must be >= 1");
}

ClassicalField sample_initial_field(const ClassicalInitialEnsemble& ensemble, long long k) {
  SplitMix64 rng(sample_seed(ensemble.master_seed, static_cast<std::uint64_t>(k)));
  ClassicalField field;
  field.amplitudes.resize(ensemble.occupations.size());
  for (std::size_t j = 0; j < ensemble.occupations.size(); ++j) {
    const double modulus = std::sqrt(ensemble.occupations[j] + 0.5);
    double phase = kTwoPi * rng.next_double();
    if (j == 0 && ensemble.phase_policy == PhasePolicy::FirstFixedZero) phase = 0.0;
    field.amplitudes[j] = Complex{modulus * std::cos(phase), modulus * std::sin(phase)};
  }
  return field;
}

}  // namespace bhwork
