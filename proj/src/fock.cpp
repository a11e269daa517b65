#include "bhwork/fock.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bhwork/errors.hpp"

namespace bhwork {

ModelParams ModelParams::chain(int sites, int bosons, double interaction) {
  ModelParams p;
  p.sites = sites;
  p.bosons = bosons;
  p.interaction = interaction;
  p.boundary = sites >= 3 ? Boundary::Periodic : Boundary::Open;
  p.validate();
  return p;
}

void ModelParams::validate() const {
  if (sites < 1) throw ConfigError("model: sites must be >= 1");
  if (bosons < 1) throw ConfigError("model: bosons must be >= 1");
  if (hbar <= 0.0) throw ConfigError("model: hbar must be positive");
}

std::vector<std::pair<int, int>> ModelParams::bonds() const {
  std::vector<std::pair<int, int>> list;
  for (int j = 0; j + 1 < sites; ++j) list.emplace_back(j, j + 1);
  if (boundary == Boundary::Periodic && sites >= 3) list.emplace_back(sites - 1, 0);
  return list;
}

double interaction_energy(const FockState& occupations, double interaction) {
  double s = 0.0;
  for (int n : occupations) s += static_cast<double>(n) * (n - 1);
  return 0.5 * interaction * s;
}

std::size_t FockBasis::OccHash::operator()(const FockState& v) const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (int n : v) {
    h ^= static_cast<std::uint64_t>(n) + 0x9E3779B97F4A7C15ull;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

FockBasis::FockBasis(ModelParams params, std::vector<FockState> states)
    : params_(std::move(params)), states_(std::move(states)) {
  index_.reserve(states_.size());
  for (std::size_t k = 0; k < states_.size(); ++k) index_.emplace(states_[k], k);
}

std::size_t FockBasis::index_of(const FockState& occupations) const {
  auto it = index_.find(occupations);
  if (it == index_.end()) throw std::out_of_range("FockBasis: state not in basis");
  return it->second;
}

bool FockBasis::contains(const FockState& occupations) const {
  return index_.find(occupations) != index_.end();
}

std::uint64_t basis_dimension(int sites, int bosons) {
  // binomial(N+L-1, N) by multiply-then-divide, exact in integers.
  const std::uint64_t n = static_cast<std::uint64_t>(bosons) + sites - 1;
  const std::uint64_t k = std::min<std::uint64_t>(bosons, sites - 1);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = n - k + i;
    if (result > UINT64_MAX / factor)
      throw CapExceededError("basis dimension overflows 64-bit integer");
    result = result * factor / i;
  }
  return result;
}

FockBasis build_basis(const ModelParams& params, std::size_t max_states) {
  params.validate();
  const std::uint64_t dim = basis_dimension(params.sites, params.bosons);
  if (dim > max_states)
    throw CapExceededError("basis dimension " + std::to_string(dim) +
                           " exceeds cap " + std::to_string(max_states));

  const int sites = params.sites;
  std::vector<FockState> states;
  states.reserve(static_cast<std::size_t>(dim));

  // Descending lexicographic enumeration starting from |N,0,...,0>.
  FockState v(sites, 0);
  v[0] = params.bosons;
  states.push_back(v);
  while (true) {
    int j = -1;
    for (int i = sites - 2; i >= 0; --i) {
      if (v[i] > 0) {
        j = i;
        break;
      }
    }
    if (j < 0) break;
    int tail = 0;
    for (int i = j + 1; i < sites; ++i) tail += v[i];
    v[j] -= 1;
    v[j + 1] = tail + 1;
    for (int i = j + 2; i < sites; ++i) v[i] = 0;
    states.push_back(v);
  }
  return FockBasis(params, std::move(states));
}

SparseHamiltonian build_hamiltonian(const FockBasis& basis) {
  const auto& params = basis.params();
  SparseHamiltonian h;
  h.diagonal.resize(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    h.diagonal[k] = interaction_energy(basis.state(k), params.interaction);

  const auto bonds = params.bonds();
  FockState moved;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const FockState& occ = basis.state(k);
    for (auto [a, b] : bonds) {
      // Both directed moves across the bond, so the term list is symmetric.
      for (auto [src, dst] : {std::pair{a, b}, std::pair{b, a}}) {
        if (occ[src] == 0) continue;
        moved = occ;
        moved[src] -= 1;
        moved[dst] += 1;
        const std::size_t m = basis.index_of(moved);
        const double amp =
            std::sqrt(static_cast<double>(occ[src]) * (occ[dst] + 1));
        h.hopping.push_back({static_cast<std::int32_t>(m),
                             static_cast<std::int32_t>(k), amp});
      }
    }
  }
  return h;
}

void SparseHamiltonian::apply(double coupling, std::span<const std::complex<double>> in,
                              std::span<std::complex<double>> out) const {
  if (in.size() != dim() || out.size() != dim())
    throw std::invalid_argument("SparseHamiltonian::apply: vector length mismatch");
  for (std::size_t k = 0; k < dim(); ++k) out[k] = diagonal[k] * in[k];
  for (const HoppingTerm& t : hopping) out[t.row] -= coupling * t.amplitude * in[t.col];
}

std::vector<double> SparseHamiltonian::dense_matrix(double coupling) const {
  const std::size_t n = dim();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) m[k * n + k] = diagonal[k];
  for (const HoppingTerm& t : hopping)
    m[static_cast<std::size_t>(t.row) * n + t.col] -= coupling * t.amplitude;
  return m;
}

namespace {

Eigen::MatrixXd dense_eigen_matrix(const SparseHamiltonian& h, double coupling,
                                   std::size_t dense_cap) {
  const std::size_t n = h.dim();
  if (n > dense_cap)
    throw CapExceededError("dense diagonalization: dimension " + std::to_string(n) +
                           " exceeds cap " + std::to_string(dense_cap));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = h.diagonal[k];
  for (const HoppingTerm& t : h.hopping) m(t.row, t.col) -= coupling * t.amplitude;
  return m;
}

}  // namespace

std::vector<double> dense_spectrum(const SparseHamiltonian& h, double coupling,
                                   std::size_t dense_cap) {
  const Eigen::MatrixXd m = dense_eigen_matrix(h, coupling, dense_cap);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dense_spectrum: eigensolver failed");
  return {solver.eigenvalues().data(), solver.eigenvalues().data() + h.dim()};
}

DenseEigensystem dense_eigensystem(const SparseHamiltonian& h, double coupling,
                                   std::size_t dense_cap) {
  const Eigen::MatrixXd m = dense_eigen_matrix(h, coupling, dense_cap);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dense_eigensystem: eigensolver failed");
  DenseEigensystem out;
  const std::size_t n = h.dim();
  out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  out.vectors.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.vectors[k].resize(n);
    for (std::size_t i = 0; i < n; ++i) out.vectors[k][i] = solver.eigenvectors()(i, k);
  }
  return out;
}

}  // namespace bhwork
