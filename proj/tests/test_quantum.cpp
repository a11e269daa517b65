#include <doctest.h>

#include <cmath>
#include <random>

#include "bhwork/errors.hpp"
#include "bhwork/quantum.hpp"
#include "oracles.hpp"

using namespace bhwork;

namespace {

ComplexVector random_unit(std::size_t dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  ComplexVector v(dim);
  double norm = 0.0;
  for (auto& c : v) {
    c = {uni(rng), uni(rng)};
    norm += std::norm(c);
  }
  norm = std::sqrt(norm);
  for (auto& c : v) c /= norm;
  return v;
}

}  // namespace

TEST_CASE("zero drive leaves all moduli unchanged (diagonal evolution)") {
  const FockBasis basis = build_basis(ModelParams::chain(2, 6, 1.3));
  const SparseHamiltonian h = build_hamiltonian(basis);
  QuantumState state;
  state.basis = basis;
  state.coefficients = random_unit(basis.size(), 7);

  const QuantumState out =
      evolve_quantum(state, DriveProtocol::parabolic(0.0, 10.0), h, IntegratorConfig{});
  for (std::size_t k = 0; k < basis.size(); ++k)
    CHECK(std::norm(out.coefficients[k]) ==
          doctest::Approx(std::norm(state.coefficients[k])).epsilon(1e-10));
}

TEST_CASE("U=0 evolution factorizes into the lifted one-body beam splitter") {
  // theta = integral of J over the protocol (hbar = 1)
  const double j0 = 0.8, tau = 3.0;
  const double theta = j0 * tau * tau / 6.0;

  for (auto [n1, n2] : {std::pair{1, 1}, {2, 1}, {3, 2}}) {
    const ModelParams params = ModelParams::chain(2, n1 + n2, 0.0);
    const TransitionDistribution dist = quantum_transition_probs(
        {n1, n2}, DriveProtocol::parabolic(j0, tau), params, IntegratorConfig{});
    const auto amps = oracles::two_mode_lift(n1, n2, theta);
    for (int m = 0; m <= n1 + n2; ++m) {
      const std::size_t idx = dist.basis.index_of({m, n1 + n2 - m});
      CHECK(dist.probabilities[idx] == doctest::Approx(std::norm(amps[m])).epsilon(5e-7));
    }
  }

  // N=2 from |1,1>: closed forms 2 cos^2 sin^2 and cos^2(2 theta)
  const ModelParams params = ModelParams::chain(2, 2, 0.0);
  const TransitionDistribution dist = quantum_transition_probs(
      {1, 1}, DriveProtocol::parabolic(j0, tau), params, IntegratorConfig{});
  const double c = std::cos(theta), s = std::sin(theta);
  CHECK(dist.probabilities[dist.basis.index_of({2, 0})] ==
        doctest::Approx(2.0 * c * c * s * s).epsilon(1e-8));
  CHECK(dist.probabilities[dist.basis.index_of({1, 1})] ==
        doctest::Approx(std::cos(2.0 * theta) * std::cos(2.0 * theta)).epsilon(1e-8));
}

TEST_CASE("slice-exponential oracle: N=2 two-site generic parameters") {
  const ModelParams params = ModelParams::chain(2, 2, 1.0);
  const FockBasis basis = build_basis(params);
  const SparseHamiltonian h = build_hamiltonian(basis);
  const int slices = 1000;
  const DriveProtocol staircase = DriveProtocol::parabolic_staircase(5.0, 10.0, slices);

  QuantumState state = make_fock_state(basis, {1, 1});
  IntegratorConfig cfg;
  cfg.base_steps = 4000;  // multiple of the slice count
  const QuantumState out = evolve_quantum(state, staircase, h, cfg);
  const ComplexVector ref =
      oracles::staircase_exponential(h, params.hbar, 5.0, 10.0, slices, state.coefficients);

  double max_err = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k)
    max_err = std::max(max_err, std::abs(out.coefficients[k] - ref[k]));
  CHECK(max_err < 1e-6);
}

TEST_CASE("slice-exponential oracle: three-site basis") {
  const ModelParams params = ModelParams::chain(3, 4, 5.0 / 4);
  const FockBasis basis = build_basis(params);
  REQUIRE(basis.size() == 15);
  const SparseHamiltonian h = build_hamiltonian(basis);
  const int slices = 512;
  const DriveProtocol staircase = DriveProtocol::parabolic_staircase(5.0, 10.0, slices);

  QuantumState state = make_fock_state(basis, {1, 1, 2});
  const QuantumState out = evolve_quantum(state, staircase, h, IntegratorConfig{});
  const ComplexVector ref =
      oracles::staircase_exponential(h, params.hbar, 5.0, 10.0, slices, state.coefficients);
  double max_err = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k)
    max_err = std::max(max_err, std::abs(out.coefficients[k] - ref[k]));
  CHECK(max_err < 1e-6);
}

TEST_CASE("transition rows are normalized and exchange-symmetric") {
  const ModelParams params = ModelParams::chain(2, 8, 5.0 / 8);
  const TransitionDistribution dist = quantum_transition_probs(
      {4, 4}, DriveProtocol::parabolic(5.0, 10.0), params, IntegratorConfig{});
  CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-8));
  for (int m = 0; m <= 8; ++m) {
    const double p = dist.probabilities[dist.basis.index_of({m, 8 - m})];
    const double q = dist.probabilities[dist.basis.index_of({8 - m, m})];
    CHECK(p == doctest::Approx(q).epsilon(1e-8));
  }
}

TEST_CASE("raw coefficient propagation is linear") {
  const ModelParams params = ModelParams::chain(2, 4, 0.9);
  const FockBasis basis = build_basis(params);
  const SparseHamiltonian h = build_hamiltonian(basis);
  const DriveProtocol protocol = DriveProtocol::parabolic(2.0, 4.0);
  const IntegratorConfig cfg;

  const ComplexVector u = random_unit(basis.size(), 11);
  const ComplexVector v = random_unit(basis.size(), 12);
  const Complex alpha{0.6, -0.3}, beta{-0.2, 0.8};
  ComplexVector mixed(basis.size());
  for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] = alpha * u[i] + beta * v[i];

  const ComplexVector eu = integrate_coefficients(h, protocol, params.hbar, u, cfg);
  const ComplexVector ev = integrate_coefficients(h, protocol, params.hbar, v, cfg);
  const ComplexVector em = integrate_coefficients(h, protocol, params.hbar, mixed, cfg);
  for (std::size_t i = 0; i < mixed.size(); ++i)
    CHECK(std::abs(em[i] - (alpha * eu[i] + beta * ev[i])) < 1e-8);
}

TEST_CASE("time reversal: conjugated evolution under the mirrored drive returns home") {
  // The parabolic drive is symmetric about tau/2, so the reversed protocol
  // is the protocol itself and conjugation implements backward evolution.
  const ModelParams params = ModelParams::chain(2, 10, 0.5);
  const FockBasis basis = build_basis(params);
  const SparseHamiltonian h = build_hamiltonian(basis);
  const DriveProtocol protocol = DriveProtocol::parabolic(3.0, 6.0);
  const IntegratorConfig cfg;

  const ComplexVector start = random_unit(basis.size(), 21);
  ComplexVector forward = integrate_coefficients(h, protocol, params.hbar, start, cfg);
  for (auto& c : forward) c = std::conj(c);
  ComplexVector back = integrate_coefficients(h, protocol, params.hbar, forward, cfg);
  for (auto& c : back) c = std::conj(c);
  for (std::size_t i = 0; i < start.size(); ++i)
    CHECK(std::abs(back[i] - start[i]) < 1e-6);
}

TEST_CASE("norm drift is tracked and non-convergence raises with the drift attached") {
  const ModelParams params = ModelParams::chain(2, 12, 0.4);
  const FockBasis basis = build_basis(params);
  const SparseHamiltonian h = build_hamiltonian(basis);
  QuantumState state = make_fock_state(basis, {6, 6});

  IntegratorConfig good;
  const QuantumState out = evolve_quantum(state, DriveProtocol::parabolic(5.0, 10.0), h, good);
  CHECK(out.norm_drift < good.norm_tolerance);
  CHECK(out.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(out.accepted_steps >= 2 * good.base_steps);

  IntegratorConfig starved;
  starved.base_steps = 1;
  starved.max_refinements = 1;
  starved.norm_tolerance = 1e-12;
  CHECK_THROWS_AS(
      (void)evolve_quantum(state, DriveProtocol::parabolic(5.0, 10.0), h, starved),
      ConvergenceError);
  try {
    (void)evolve_quantum(state, DriveProtocol::parabolic(5.0, 10.0), h, starved);
  } catch (const ConvergenceError& e) {
    CHECK(e.last_drift() > 0.0);
  }
}

TEST_CASE("initial state must be a member of the basis") {
  const ModelParams params = ModelParams::chain(2, 4, 1.0);
  CHECK_THROWS_AS((void)quantum_transition_probs({5, 0}, DriveProtocol::parabolic(1.0, 1.0),
                                                 params, IntegratorConfig{}),
                  std::out_of_range);
}
