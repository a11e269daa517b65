#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bhwork/fock.hpp"
#include "bhwork/transition.hpp"

namespace bhwork {

/// Inverse temperature of the initial thermal state, or the zero-temperature
/// (ground-state) marker.
struct Beta {
  double value = 0.0;
  bool ground_state = false;

  static Beta finite(double beta) { return {beta, false}; }
  static Beta ground() { return {0.0, true}; }
};

enum class InitialProvenance { QuantumGibbs, ClassicalWeyl, Deterministic };

/// Probability of drawing each initial Fock state, indexed by basis index.
struct InitialDistribution {
  std::vector<double> probabilities;
  InitialProvenance provenance = InitialProvenance::Deterministic;
};

/// Boltzmann weights over the given state energies. The ground-state marker
/// puts equal weight on every state tied (to rounding) with the minimum.
InitialDistribution gibbs_initial(const std::vector<double>& energies, Beta beta);

/// Smooth (Weyl) density of states estimated by uniform sampling of the
/// norm-conserving sphere sum|psi_j|^2 = N + L/2 in (q, p) coordinates.
struct WeylDosEstimate {
  double e_min = 0.0;
  double e_max = 0.0;
  std::vector<double> density;    // at bin centers
  std::vector<double> std_error;  // per-bin Monte-Carlo error
  long long samples = 0;
  double radius = 0.0;

  int bins() const { return static_cast<int>(density.size()); }
  double bin_width() const { return (e_max - e_min) / bins(); }
  double bin_center(int i) const { return e_min + (i + 0.5) * bin_width(); }
  /// Total integral of the density (composite midpoint rule).
  double total_integral() const;
  /// Piecewise-linear interpolation between bin centers, clamped at the ends.
  double interpolate(double energy) const;
};

/// Closed-form normalization of the estimate: (4/pi)^L times the surface
/// area of the radius-sqrt(N+L/2) sphere in 2L dimensions.
double weyl_dos_normalization(const ModelParams& params);

WeylDosEstimate weyl_dos_mc(const ModelParams& params, double coupling, int bins,
                            long long samples, std::uint64_t seed, int threads = 1);

/// Constant offset between quantum interaction energies and the mean-field
/// energies of the corresponding tori at J = 0: U*N + U*L/8.
double weyl_energy_offset(const ModelParams& params);

/// Classical initial distribution: the Weyl density, Boltzmann weighted,
/// integrated between consecutive quantum eigenvalues (each shifted by
/// energy_offset onto the classical energy scale). The last level integrates
/// to the top of the sampled support. Degenerate consecutive levels get zero
/// width and therefore zero weight for the earlier duplicate.
InitialDistribution classical_initial(const WeylDosEstimate& dos,
                                      const std::vector<double>& energies, Beta beta,
                                      double energy_offset = 0.0);

struct WorkPoint {
  double work = 0.0;
  double probability = 0.0;
};

/// Probability over two-point work values W = E_n^B - E_m^A.
struct WorkDistribution {
  std::vector<WorkPoint> support;  // ascending in work value
  Provenance provenance = Provenance::Quantum;
  std::optional<Beta> beta;
};

/// Contract initial weights with transition rows onto work values, merging
/// values closer than 1e-9 * max|E|. transitions[m] must hold the row for
/// initial state m whenever initial.probabilities[m] > 0.
WorkDistribution assemble_work_distribution(const InitialDistribution& initial,
                                            const std::vector<TransitionDistribution>& transitions,
                                            const std::vector<double>& energies_a,
                                            const std::vector<double>& energies_b);

/// <e^{-beta W}> over the distribution (the fluctuation-relation check).
double exp_beta_work(const WorkDistribution& dist, double beta);

/// <W> over the distribution.
double mean_work(const WorkDistribution& dist);

/// Running sum of the probabilities over final states in ascending
/// lexicographic occupation order (for two sites: n1 = 0..N, matching the
/// scalar final-state label).
std::vector<double> cumulative(const TransitionDistribution& dist);

/// Root-mean-square difference of two equal-length cumulative vectors.
double rmse(const std::vector<double>& sq, const std::vector<double>& sc);

}  // namespace bhwork
