#pragma once

#include <array>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "bhwork/classical.hpp"
#include "bhwork/drive.hpp"
#include "bhwork/fock.hpp"
#include "bhwork/transition.hpp"

namespace bhwork {

/// Settings of the boundary-value trajectory search.
struct ShootingConfig {
  int scan_resolution = 4096;       // phase grid points for the two-site scan
  int scan_resolution_3site = 256;  // grid points per phase dimension, three sites
  double root_tolerance = 1e-9;     // |psi(tau)|^2 mismatch at an accepted root
  double fd_step = 1e-6;            // finite-difference step for derivatives
  int max_newton_iters = 50;

  void validate() const;
};

inline constexpr double kCausticThreshold = 1e-12;

/// Phase-ensemble Monte-Carlo estimate of the transition probabilities:
/// evolve each sampled field to tau and bin the final site occupations into
/// unit action windows [n, n+1). Site 1 is implied by conservation. Samples
/// whose binned occupations fall outside [0, N] (or whose implied first-site
/// occupation is negative) are counted as leakage and excluded.
TransitionDistribution classical_transition_mc(const ClassicalInitialEnsemble& ensemble,
                                               const DriveProtocol& protocol,
                                               const ModelParams& params,
                                               const IntegratorConfig& cfg, int threads = 1);

struct TwoSiteRoot {
  double phase = 0.0;       // initial phase of site 2 at the root
  double derivative = 0.0;  // d|psi_1(tau)|^2 / d phase
  bool caustic = false;     // derivative below the caustic threshold
};

/// Scans the two-site boundary-value map and reuses it across targets: one
/// trajectory per grid node, then bisection of every bracketed crossing.
/// Crossings are located with a cheap calibrated integrator; roots that
/// carry trajectory weights are polished to root_tolerance with a finer one.
class TwoSiteShooter {
 public:
  TwoSiteShooter(const FockState& initial, const DriveProtocol& protocol,
                 const ModelParams& params, const ShootingConfig& shoot,
                 const IntegratorConfig& cfg, int threads = 1);

  /// |psi_1(tau)|^2 as a function of the initial phase of site 2 (fine).
  double map(double phase) const;

  /// Phases where map == level, bisected from every bracketed sign change of
  /// the scan and polished to root_tolerance.
  std::vector<double> level_crossings(double level) const;

  /// Roots targeting |psi_1(tau)|^2 = final_n1 + 1/2, with derivatives.
  std::vector<TwoSiteRoot> roots_for(int final_n1) const;

  /// Fraction of the phase circle mapping into [final_n1, final_n1 + 1):
  /// the unit-bin integral of the trajectory-sum density.
  double bin_probability(int final_n1) const;

  double scan_min() const { return scan_min_; }
  double scan_max() const { return scan_max_; }
  int scan_steps() const { return scan_steps_; }
  int fine_steps() const { return fine_steps_; }

 private:
  double map_at(double phase, int steps) const;
  std::vector<TwoSiteRoot> find_crossings(double level, bool polish) const;
  const std::vector<TwoSiteRoot>& cheap_edge_crossings(double level) const;

  FockState initial_;
  DriveProtocol protocol_;
  ModelParams params_;
  ShootingConfig shoot_;
  int scan_steps_ = 0;
  int fine_steps_ = 0;
  std::vector<double> grid_;  // map values at scan_resolution nodes
  double scan_min_ = 0.0;
  double scan_max_ = 0.0;
  // Bin edges are shared by neighboring bins; cache their (unpolished)
  // crossings. Guarded for concurrent bin_probability calls.
  mutable std::mutex edge_mutex_;
  mutable std::map<long long, std::vector<TwoSiteRoot>> edge_cache_;
};

/// All two-site trajectories reaching final_n1, via a one-off scan.
std::vector<TwoSiteRoot> shoot_trajectories_two_site(const FockState& initial, int final_n1,
                                                     const DriveProtocol& protocol,
                                                     const ModelParams& params,
                                                     const ShootingConfig& shoot,
                                                     const IntegratorConfig& cfg);

/// Trajectory-sum transition probabilities: for each final label the sum of
/// 1/(2 pi |derivative|) over non-caustic roots (the one-phase determinant
/// formula). Bins with excluded caustic roots carry an uncertainty flag.
TransitionDistribution classical_transition_shoot(const FockState& initial,
                                                  const DriveProtocol& protocol,
                                                  const ModelParams& params,
                                                  const ShootingConfig& shoot,
                                                  const IntegratorConfig& cfg, int threads = 1);

/// Unit-bin integrals of the shoot density for every final label, aligned
/// with classical_transition_mc binning. Computed from the same shooter.
std::vector<double> shoot_bin_probabilities(const TwoSiteShooter& shooter,
                                            const FockBasis& basis);

struct ThreeSiteRoot {
  double phase2 = 0.0;
  double phase3 = 0.0;
  double jacobian_det = 0.0;  // d(final occupations 2,3) / d(initial phases 2,3)
  double residual = 0.0;      // max target mismatch at the accepted root
  bool caustic = false;
};

/// Best-effort three-site trajectory search: coarse grid of Newton starts,
/// finite-difference Jacobians, deduplicated converged roots. Completeness is
/// not guaranteed for chaotic dynamics.
std::vector<ThreeSiteRoot> shoot_trajectories_three_site(const FockState& initial,
                                                         const FockState& final_state,
                                                         const DriveProtocol& protocol,
                                                         const ModelParams& params,
                                                         const ShootingConfig& shoot,
                                                         const IntegratorConfig& cfg,
                                                         int threads = 1);

/// One diagnostic row per trajectory found by the shooting search.
struct ShootDiagRow {
  FockState target;
  std::vector<double> phases;       // one phase for L=2, two for L=3
  double derivative_or_det = 0.0;   // scan derivative (L=2) or Jacobian det (L=3)
  double weight = 0.0;              // contribution to the transition probability
  bool caustic = false;
};

/// Full shooting outcome: the trajectory-sum distribution, the unit-bin
/// integrals (two-site only), and per-trajectory diagnostics.
struct ShootReport {
  TransitionDistribution distribution;
  std::vector<double> bin_integrated;  // by basis index; empty for L=3
  std::vector<ShootDiagRow> diagnostics;
};

ShootReport classical_shoot_report(const FockState& initial, const DriveProtocol& protocol,
                                   const ModelParams& params, const ShootingConfig& shoot,
                                   const IntegratorConfig& cfg, int threads = 1);

}  // namespace bhwork
