#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "bhwork/fock.hpp"
#include "bhwork/integrate.hpp"

// Test-side reference computations. These deliberately avoid the library's
// propagation code paths: exponentials come from dense eigendecompositions,
// and the beam-splitter lift is pure combinatorics.
namespace oracles {

using bhwork::Complex;
using bhwork::ComplexVector;

// Exact propagation of the slice-midpoint staircase of the parabolic drive:
// the product of matrix exponentials exp(-i H(J_s) dt / hbar).
inline ComplexVector staircase_exponential(const bhwork::SparseHamiltonian& h, double hbar,
                                           double j0, double tau, int slices,
                                           const ComplexVector& c0) {
  const std::size_t dim = h.dim();
  Eigen::VectorXcd c(dim);
  for (std::size_t i = 0; i < dim; ++i) c(i) = c0[i];
  const double dt = tau / slices;
  for (int s = 0; s < slices; ++s) {
    const double tm = (s + 0.5) * dt;
    const double coupling = j0 * (tm - tm * tm / tau);
    Eigen::MatrixXd hm = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) hm(k, k) = h.diagonal[k];
    for (const bhwork::HoppingTerm& t : h.hopping) hm(t.row, t.col) -= coupling * t.amplitude;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hm);
    const Eigen::VectorXd& e = es.eigenvalues();
    const Eigen::MatrixXd& v = es.eigenvectors();
    Eigen::VectorXcd in_eigen = v.transpose() * c;
    for (std::size_t k = 0; k < dim; ++k)
      in_eigen(k) *= std::exp(Complex{0.0, -e(k) * dt / hbar});
    c = v * in_eigen;
  }
  ComplexVector out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = c(i);
  return out;
}

// Amplitudes over |m, N-m> produced by lifting the one-body beam-splitter
// [[cos th, i sin th], [i sin th, cos th]] to n1 + n2 bosons: expand
// (u11 x + u21 y)^n1 (u12 x + u22 y)^n2 and attach the bosonic factorials.
inline std::vector<Complex> two_mode_lift(int n1, int n2, double theta) {
  const Complex u11{std::cos(theta), 0.0};
  const Complex u22 = u11;
  const Complex u12{0.0, std::sin(theta)};
  const Complex u21 = u12;

  auto power_coeffs = [](Complex a, Complex b, int n) {
    // coefficients of (a x + b y)^n in x^k y^(n-k)
    std::vector<Complex> c(n + 1);
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
      if (k > 0) binom = binom * (n - k + 1) / k;
      c[k] = binom * std::pow(a, k) * std::pow(b, n - k);
    }
    return c;
  };
  const std::vector<Complex> p1 = power_coeffs(u11, u21, n1);
  const std::vector<Complex> p2 = power_coeffs(u12, u22, n2);

  const int total = n1 + n2;
  std::vector<Complex> poly(total + 1, Complex{0.0, 0.0});
  for (int i = 0; i <= n1; ++i)
    for (int j = 0; j <= n2; ++j) poly[i + j] += p1[i] * p2[j];

  auto log_factorial = [](int n) { return std::lgamma(n + 1.0); };
  std::vector<Complex> amp(total + 1);
  for (int m = 0; m <= total; ++m) {
    const double scale = std::exp(0.5 * (log_factorial(m) + log_factorial(total - m) -
                                         log_factorial(n1) - log_factorial(n2)));
    amp[m] = poly[m] * scale;
  }
  return amp;  // amp[m] for final |m, N-m>
}

}  // namespace oracles
