#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bhwork {

enum class Boundary { Open, Periodic };

/// Static model parameters of a 1D bosonic chain: L sites, N bosons,
/// on-site interaction U. The chain geometry follows the boundary flag;
/// a two-site chain always has a single bond.
struct ModelParams {
  int sites = 2;
  int bosons = 2;
  double interaction = 0.0;
  double hbar = 1.0;
  Boundary boundary = Boundary::Open;

  /// Conventional geometry: open chain for L <= 2, ring for L >= 3.
  static ModelParams chain(int sites, int bosons, double interaction);

  /// Hopping bonds (j, j+1) as zero-based site index pairs. The wrap bond
  /// (L-1, 0) is present only for periodic boundary with L >= 3.
  std::vector<std::pair<int, int>> bonds() const;

  void validate() const;
};

/// Occupation-number vector of length L, entries >= 0 summing to N.
using FockState = std::vector<int>;

/// Interaction energy (U/2) * sum_j n_j (n_j - 1) of one occupation vector.
double interaction_energy(const FockState& occupations, double interaction);

/// The full fixed-N occupation basis, enumerated in descending lexicographic
/// order so that state indices are reproducible: index 0 is |N,0,...,0>.
class FockBasis {
 public:
  FockBasis() = default;
  FockBasis(ModelParams params, std::vector<FockState> states);

  const ModelParams& params() const { return params_; }
  const std::vector<FockState>& states() const { return states_; }
  const FockState& state(std::size_t index) const { return states_[index]; }
  std::size_t size() const { return states_.size(); }

  /// Dense index of an occupation vector; throws std::out_of_range if the
  /// vector is not a member of this basis.
  std::size_t index_of(const FockState& occupations) const;
  bool contains(const FockState& occupations) const;

 private:
  struct OccHash {
    std::size_t operator()(const FockState& v) const;
  };

  ModelParams params_;
  std::vector<FockState> states_;
  std::unordered_map<FockState, std::size_t, OccHash> index_;
};

inline constexpr std::size_t kDefaultBasisCap = 2'000'000;
inline constexpr std::size_t kDefaultDenseCap = 5'000;

/// Number of basis states binomial(N+L-1, N); throws CapExceededError if the
/// value does not fit in 64 bits.
std::uint64_t basis_dimension(int sites, int bosons);

/// Enumerate the fixed-N basis. Throws CapExceededError when the dimension
/// exceeds max_states.
FockBasis build_basis(const ModelParams& params, std::size_t max_states = kDefaultBasisCap);

/// H(J) = H_diag - J * H_hop stored as the interaction diagonal plus an
/// explicit list of hopping matrix elements. The hopping list contains the
/// directed move j -> j+1 and its Hermitian partner for every bond and every
/// source state, so it is symmetric under row/column exchange.
struct HoppingTerm {
  std::int32_t row = 0;
  std::int32_t col = 0;
  double amplitude = 0.0;
};

struct SparseHamiltonian {
  std::vector<double> diagonal;
  std::vector<HoppingTerm> hopping;

  std::size_t dim() const { return diagonal.size(); }

  /// out = (H_diag - J * H_hop) * in, without materializing a dense matrix.
  void apply(double coupling, std::span<const std::complex<double>> in,
             std::span<std::complex<double>> out) const;

  /// Dense real-symmetric matrix H(J), row-major, dim x dim.
  std::vector<double> dense_matrix(double coupling) const;
};

SparseHamiltonian build_hamiltonian(const FockBasis& basis);

/// All eigenvalues of H(J), ascending. Degenerate values are reported as-is.
/// Throws CapExceededError above the dense cap.
std::vector<double> dense_spectrum(const SparseHamiltonian& h, double coupling,
                                   std::size_t dense_cap = kDefaultDenseCap);

struct DenseEigensystem {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // vectors[k] is the k-th eigenvector
};

DenseEigensystem dense_eigensystem(const SparseHamiltonian& h, double coupling,
                                   std::size_t dense_cap = kDefaultDenseCap);

}  // namespace bhwork
