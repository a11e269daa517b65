#include "bhwork/classical_prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bhwork/errors.hpp"
#include "bhwork/parallel.hpp"

namespace bhwork {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

void check_initial(const FockState& occ, const ModelParams& params) {
  if (static_cast<int>(occ.size()) != params.sites)
    throw ConfigError("initial occupations: wrong number of sites");
  long long total = 0;
  for (int n : occ) {
    if (n < 0) throw ConfigError("initial occupations: negative entry");
    total += n;
  }
  if (total != params.bosons)
    throw ConfigError("initial occupations: sum != total boson number");
}

// Final Fock label of one evolved field, or nothing when any binned site
// falls outside [0, N] or the implied first site would be negative.
std::optional<std::size_t> classify_final(const ComplexVector& psi, const FockBasis& basis) {
  const ModelParams& p = basis.params();
  FockState occ(p.sites, 0);
  int rest = 0;
  for (int j = 1; j < p.sites; ++j) {
    const double x = std::norm(psi[j]);
    const int n = static_cast<int>(std::floor(x));
    if (n < 0 || n > p.bosons) return std::nullopt;
    occ[j] = n;
    rest += n;
  }
  const int n0 = p.bosons - rest;
  if (n0 < 0) return std::nullopt;
  occ[0] = n0;
  return basis.index_of(occ);
}

double circular_distance(double a, double b) {
  double d = std::fabs(a - b);
  if (d > kTwoPi - d) d = kTwoPi - d;
  return d;
}

}  // namespace

void ShootingConfig::validate() const {
  if (scan_resolution < 2) throw ConfigError("shooting: scan_resolution must be >= 2");
  if (scan_resolution_3site < 2) throw ConfigError("shooting: 3-site scan resolution must be >= 2");
  if (root_tolerance <= 0.0) throw ConfigError("shooting: root_tolerance must be positive");
  if (fd_step <= 0.0) throw ConfigError("shooting: fd_step must be positive");
  if (max_newton_iters < 1) throw ConfigError("shooting: max_newton_iters must be >= 1");
}

TransitionDistribution classical_transition_mc(const ClassicalInitialEnsemble& ensemble,
                                               const DriveProtocol& protocol,
                                               const ModelParams& params,
                                               const IntegratorConfig& cfg, int threads) {
  ensemble.validate();
  check_initial(ensemble.occupations, params);
  protocol.validate();
  const FockBasis basis = build_basis(params);

  const long long n = ensemble.sample_count;
  const int workers = resolve_threads(threads);
  std::vector<std::vector<long long>> counts(workers, std::vector<long long>(basis.size(), 0));
  std::vector<long long> leaks(workers, 0);

  parallel_chunks(n, workers, [&](int w, long long begin, long long end) {
    for (long long k = begin; k < end; ++k) {
      const ClassicalField start = sample_initial_field(ensemble, k);
      const ClassicalField final_field = evolve_classical(start, protocol, params, cfg);
      if (auto idx = classify_final(final_field.amplitudes, basis))
        counts[w][*idx] += 1;
      else
        leaks[w] += 1;
    }
  });

  TransitionDistribution dist;
  dist.basis = basis;
  dist.initial = ensemble.occupations;
  dist.provenance = Provenance::ClassicalMc;
  dist.sample_count = n;
  dist.probabilities.assign(basis.size(), 0.0);
  dist.std_error.assign(basis.size(), 0.0);
  long long leaked = 0;
  for (int w = 0; w < workers; ++w) leaked += leaks[w];
  for (std::size_t i = 0; i < basis.size(); ++i) {
    long long c = 0;
    for (int w = 0; w < workers; ++w) c += counts[w][i];
    const double p = static_cast<double>(c) / n;
    dist.probabilities[i] = p;
    dist.std_error[i] = std::sqrt(p * (1.0 - p) / n);
  }
  dist.leakage_fraction = static_cast<double>(leaked) / n;
  dist.leakage_warning = dist.leakage_fraction > 0.01;
  return dist;
}

// ---------------------------------------------------------------------------
// Two-site shooting

TwoSiteShooter::TwoSiteShooter(const FockState& initial, const DriveProtocol& protocol,
                               const ModelParams& params, const ShootingConfig& shoot,
                               const IntegratorConfig& cfg, int threads)
    : initial_(initial), protocol_(protocol), params_(params), shoot_(shoot) {
  if (params.sites != 2) throw ConfigError("two-site shooting requires a two-site model");
  check_initial(initial, params);
  shoot.validate();
  protocol.validate();

  // Calibrate step counts on probe trajectories: a cheap level for the grid
  // scan and bracketing, a fine level meeting root_tolerance in |psi|^2.
  const double probes[] = {0.31, 1.07, 1.83, 2.59, 3.35, 4.11, 4.87, 5.63};
  const double fine_tol = shoot.root_tolerance;
  const double scan_tol = std::max(1e-4, fine_tol);
  int steps = std::max(64, cfg.base_steps / 16);
  std::vector<double> prev;
  for (double p : probes) prev.push_back(map_at(p, steps));
  scan_steps_ = 0;
  fine_steps_ = 0;
  const int max_steps = 1 << 24;
  while (steps < max_steps) {
    const int doubled = steps * 2;
    double diff = 0.0;
    std::vector<double> cur;
    for (std::size_t i = 0; i < prev.size(); ++i) {
      cur.push_back(map_at(probes[i], doubled));
      diff = std::max(diff, std::fabs(cur[i] - prev[i]));
    }
    if (scan_steps_ == 0 && diff < scan_tol) scan_steps_ = doubled;
    if (diff < fine_tol) {
      fine_steps_ = doubled;
      break;
    }
    prev = std::move(cur);
    steps = doubled;
  }
  if (fine_steps_ == 0)
    throw ConvergenceError("two-site shooting: step calibration did not converge", 0.0);
  if (scan_steps_ == 0) scan_steps_ = fine_steps_;

  const int g = shoot.scan_resolution;
  grid_.resize(g);
  parallel_chunks(g, threads, [&](int, long long begin, long long end) {
    for (long long i = begin; i < end; ++i)
      grid_[i] = map_at(kTwoPi * static_cast<double>(i) / g, scan_steps_);
  });
  auto [mn, mx] = std::minmax_element(grid_.begin(), grid_.end());
  scan_min_ = *mn;
  scan_max_ = *mx;
}

double TwoSiteShooter::map_at(double phase, int steps) const {
  ClassicalField field;
  field.amplitudes = {
      Complex{std::sqrt(initial_[0] + 0.5), 0.0},
      Complex{std::sqrt(initial_[1] + 0.5) * std::cos(phase),
              std::sqrt(initial_[1] + 0.5) * std::sin(phase)},
  };
  // Uncalibrated probe runs may drift; calibrated production runs must not.
  const double guard = (steps < scan_steps_ || scan_steps_ == 0) ? 1e9 : 1e-6;
  const ClassicalField out =
      evolve_classical_fixed_steps(field, protocol_, params_, steps, guard);
  return std::norm(out.amplitudes[0]);
}

double TwoSiteShooter::map(double phase) const { return map_at(phase, fine_steps_); }

std::vector<TwoSiteRoot> TwoSiteShooter::find_crossings(double level, bool polish) const {
  const int g = shoot_.scan_resolution;
  const double h = shoot_.fd_step;
  std::vector<TwoSiteRoot> roots;

  for (int i = 0; i < g; ++i) {
    const double f0 = grid_[i] - level;
    const double f1 = grid_[(i + 1) % g] - level;
    double lo = kTwoPi * static_cast<double>(i) / g;
    double hi = kTwoPi * static_cast<double>(i + 1) / g;
    double root;
    if (f0 == 0.0) {
      root = lo;
    } else if ((f0 < 0.0) != (f1 < 0.0)) {
      // Bisection on the scan-level map localizes the crossing well below
      // the finite-difference step.
      double flo = f0;
      for (int it = 0; it < 30 && hi - lo > 1e-11; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = map_at(mid, scan_steps_) - level;
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((flo < 0.0) == (fm < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      root = 0.5 * (lo + hi);
    } else {
      continue;
    }

    TwoSiteRoot out;
    if (polish) {
      // Fine derivative doubles as the Newton slope and the reported value.
      double d = (map(root + h) - map(root - h)) / (2.0 * h);
      double f = map(root) - level;
      for (int it = 0; it < 6 && std::fabs(d) >= kCausticThreshold; ++it) {
        if (std::fabs(f) <= shoot_.root_tolerance) break;
        root -= f / d;
        f = map(root) - level;
      }
      if (std::fabs(f) > shoot_.root_tolerance) {
        // Newton stalled (flat region); bisect the fine map on a widened
        // bracket around the scan-level estimate.
        double a = root - kTwoPi / shoot_.scan_resolution;
        double b = root + kTwoPi / shoot_.scan_resolution;
        double fa = map(a) - level;
        const double fb = map(b) - level;
        if ((fa < 0.0) != (fb < 0.0)) {
          for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (a + b);
            const double fm = map(mid) - level;
            if (std::fabs(fm) <= shoot_.root_tolerance || b - a < 1e-14) {
              root = mid;
              break;
            }
            if ((fa < 0.0) == (fm < 0.0)) {
              a = mid;
              fa = fm;
            } else {
              b = mid;
            }
          }
        }
        d = (map(root + h) - map(root - h)) / (2.0 * h);
      }
      out.derivative = d;
      out.caustic = std::fabs(d) < kCausticThreshold;
    } else {
      const double d =
          (map_at(root + h, scan_steps_) - map_at(root - h, scan_steps_)) / (2.0 * h);
      out.derivative = d;
      out.caustic = std::fabs(d) < kCausticThreshold;
    }
    out.phase = std::fmod(root, kTwoPi);
    if (out.phase < 0.0) out.phase += kTwoPi;
    roots.push_back(out);
  }

  // Deduplicate circularly on the phase.
  std::sort(roots.begin(), roots.end(),
            [](const TwoSiteRoot& a, const TwoSiteRoot& b) { return a.phase < b.phase; });
  std::vector<TwoSiteRoot> kept;
  const double tol = 10.0 * shoot_.fd_step;
  for (const TwoSiteRoot& r : roots) {
    if (kept.empty() || circular_distance(kept.back().phase, r.phase) > tol) kept.push_back(r);
  }
  while (kept.size() > 1 && circular_distance(kept.front().phase, kept.back().phase) <= tol)
    kept.pop_back();
  return kept;
}

const std::vector<TwoSiteRoot>& TwoSiteShooter::cheap_edge_crossings(double level) const {
  const long long key = llround(level * 2.0);
  {
    std::lock_guard<std::mutex> lock(edge_mutex_);
    auto it = edge_cache_.find(key);
    if (it != edge_cache_.end()) return it->second;
  }
  std::vector<TwoSiteRoot> computed = find_crossings(level, /*polish=*/false);
  std::lock_guard<std::mutex> lock(edge_mutex_);
  return edge_cache_.emplace(key, std::move(computed)).first->second;
}

std::vector<double> TwoSiteShooter::level_crossings(double level) const {
  std::vector<double> phases;
  for (const TwoSiteRoot& r : find_crossings(level, /*polish=*/true)) phases.push_back(r.phase);
  return phases;
}

std::vector<TwoSiteRoot> TwoSiteShooter::roots_for(int final_n1) const {
  return find_crossings(final_n1 + 0.5, /*polish=*/true);
}

double TwoSiteShooter::bin_probability(int final_n1) const {
  const double lo = static_cast<double>(final_n1);
  const double hi = lo + 1.0;
  std::vector<double> edges;
  for (const TwoSiteRoot& r : cheap_edge_crossings(lo)) edges.push_back(r.phase);
  for (const TwoSiteRoot& r : cheap_edge_crossings(hi)) edges.push_back(r.phase);
  if (edges.empty())
    return (grid_[0] >= lo && grid_[0] < hi) ? 1.0 : 0.0;
  std::sort(edges.begin(), edges.end());
  double inside = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double a = edges[k];
    const double b = (k + 1 < edges.size()) ? edges[k + 1] : edges[0] + kTwoPi;
    const double mid = std::fmod(0.5 * (a + b), kTwoPi);
    const double value = map_at(mid, scan_steps_);
    if (value >= lo && value < hi) inside += b - a;
  }
  return inside / kTwoPi;
}

std::vector<TwoSiteRoot> shoot_trajectories_two_site(const FockState& initial, int final_n1,
                                                     const DriveProtocol& protocol,
                                                     const ModelParams& params,
                                                     const ShootingConfig& shoot,
                                                     const IntegratorConfig& cfg) {
  TwoSiteShooter shooter(initial, protocol, params, shoot, cfg);
  return shooter.roots_for(final_n1);
}

std::vector<double> shoot_bin_probabilities(const TwoSiteShooter& shooter,
                                            const FockBasis& basis) {
  const int bosons = basis.params().bosons;
  std::vector<double> probs(basis.size(), 0.0);
  for (int n1 = 0; n1 <= bosons; ++n1)
    probs[basis.index_of({n1, bosons - n1})] = shooter.bin_probability(n1);
  return probs;
}

// ---------------------------------------------------------------------------
// Three-site shooting

namespace {

// Shared grid scan of the two-phase boundary-value map for one initial state.
class ThreeSiteScan {
 public:
  ThreeSiteScan(const FockState& initial, const DriveProtocol& protocol,
                const ModelParams& params, const ShootingConfig& shoot,
                const IntegratorConfig& cfg, int threads)
      : initial_(initial), protocol_(protocol), params_(params), shoot_(shoot) {
    if (params.sites != 3) throw ConfigError("three-site shooting requires a three-site model");
    check_initial(initial, params);
    shoot.validate();
    protocol.validate();

    const double probes[][2] = {{0.31, 4.87}, {1.83, 2.59}, {3.35, 0.31}, {5.63, 1.07}};
    const double fine_tol = shoot.root_tolerance;
    const double scan_tol = std::max(1e-4, fine_tol);
    int steps = std::max(64, cfg.base_steps / 16);
    std::vector<std::array<double, 2>> prev;
    for (auto& p : probes) prev.push_back(map_at(p[0], p[1], steps));
    const int max_steps = 1 << 22;
    while (steps < max_steps) {
      const int doubled = steps * 2;
      double diff = 0.0;
      std::vector<std::array<double, 2>> cur;
      for (std::size_t i = 0; i < prev.size(); ++i) {
        cur.push_back(map_at(probes[i][0], probes[i][1], doubled));
        diff = std::max({diff, std::fabs(cur[i][0] - prev[i][0]),
                         std::fabs(cur[i][1] - prev[i][1])});
      }
      if (scan_steps_ == 0 && diff < scan_tol) scan_steps_ = doubled;
      if (diff < fine_tol) {
        fine_steps_ = doubled;
        break;
      }
      prev = std::move(cur);
      steps = doubled;
    }
    if (fine_steps_ == 0)
      throw ConvergenceError("three-site shooting: step calibration did not converge", 0.0);
    if (scan_steps_ == 0) scan_steps_ = fine_steps_;

    const int g = shoot.scan_resolution_3site;
    grid_.resize(static_cast<std::size_t>(g) * g);
    parallel_chunks(static_cast<long long>(g) * g, threads,
                    [&](int, long long begin, long long end) {
                      for (long long k = begin; k < end; ++k) {
                        const int i = static_cast<int>(k / g);
                        const int j = static_cast<int>(k % g);
                        grid_[k] = map_at(kTwoPi * i / g, kTwoPi * j / g, scan_steps_);
                      }
                    });
  }

  std::array<double, 2> map_at(double phase2, double phase3, int steps) const {
    ClassicalField field;
    field.amplitudes.resize(3);
    field.amplitudes[0] = Complex{std::sqrt(initial_[0] + 0.5), 0.0};
    field.amplitudes[1] = std::sqrt(initial_[1] + 0.5) *
                          Complex{std::cos(phase2), std::sin(phase2)};
    field.amplitudes[2] = std::sqrt(initial_[2] + 0.5) *
                          Complex{std::cos(phase3), std::sin(phase3)};
    const double guard = (steps < scan_steps_ || scan_steps_ == 0) ? 1e9 : 1e-6;
    const ClassicalField out =
        evolve_classical_fixed_steps(field, protocol_, params_, steps, guard);
    return {std::norm(out.amplitudes[1]), std::norm(out.amplitudes[2])};
  }

  std::vector<ThreeSiteRoot> find_roots(const FockState& final_state, int threads) const {
    const double y2 = final_state[1] + 0.5;
    const double y3 = final_state[2] + 0.5;
    const int g = shoot_.scan_resolution_3site;

    // Newton starts: grid-local minima of the residual, nearest first.
    auto residual_at = [&](int i, int j) {
      const auto& v = grid_[static_cast<std::size_t>(i) * g + j];
      return std::max(std::fabs(v[0] - y2), std::fabs(v[1] - y3));
    };
    std::vector<std::pair<double, std::pair<int, int>>> starts;
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) {
        const double r = residual_at(i, j);
        if (r > 1.5) continue;
        const bool is_min = r <= residual_at((i + 1) % g, j) &&
                            r <= residual_at((i + g - 1) % g, j) &&
                            r <= residual_at(i, (j + 1) % g) &&
                            r <= residual_at(i, (j + g - 1) % g);
        if (is_min) starts.emplace_back(r, std::make_pair(i, j));
      }
    }
    std::sort(starts.begin(), starts.end());
    if (starts.size() > 512) starts.resize(512);

    std::vector<std::vector<ThreeSiteRoot>> found(resolve_threads(threads));
    parallel_chunks(static_cast<long long>(starts.size()), threads,
                    [&](int w, long long begin, long long end) {
                      for (long long k = begin; k < end; ++k) {
                        const auto [i, j] = starts[k].second;
                        auto root = newton_from(kTwoPi * i / g, kTwoPi * j / g, y2, y3);
                        if (root) found[w].push_back(*root);
                      }
                    });

    std::vector<ThreeSiteRoot> roots;
    for (auto& part : found)
      for (auto& r : part) roots.push_back(r);
    // Deduplicate on the torus.
    std::sort(roots.begin(), roots.end(), [](const ThreeSiteRoot& a, const ThreeSiteRoot& b) {
      return std::tie(a.phase2, a.phase3) < std::tie(b.phase2, b.phase3);
    });
    std::vector<ThreeSiteRoot> kept;
    const double tol = 10.0 * shoot_.fd_step;
    for (const auto& r : roots) {
      bool dup = false;
      for (const auto& k : kept)
        if (circular_distance(r.phase2, k.phase2) <= tol &&
            circular_distance(r.phase3, k.phase3) <= tol) {
          dup = true;
          break;
        }
      if (!dup) kept.push_back(r);
    }
    return kept;
  }

 private:
  std::optional<ThreeSiteRoot> newton_from(double p2, double p3, double y2, double y3) const {
    const double h = shoot_.fd_step;
    auto wrap = [](double x) {
      x = std::fmod(x, kTwoPi);
      return x < 0.0 ? x + kTwoPi : x;
    };
    auto value = [&](double a, double b, int steps) {
      const auto v = map_at(a, b, steps);
      return std::array<double, 2>{v[0] - y2, v[1] - y3};
    };
    // Cheap iterations first, fine once the residual is small.
    int steps = scan_steps_;
    std::array<double, 2> f = value(p2, p3, steps);
    for (int it = 0; it < shoot_.max_newton_iters; ++it) {
      double res = std::max(std::fabs(f[0]), std::fabs(f[1]));
      if (steps == scan_steps_ && res < 1e-4) {
        steps = fine_steps_;
        f = value(p2, p3, steps);
        res = std::max(std::fabs(f[0]), std::fabs(f[1]));
      }
      if (res <= shoot_.root_tolerance && steps == fine_steps_) {
        ThreeSiteRoot root;
        root.phase2 = wrap(p2);
        root.phase3 = wrap(p3);
        root.residual = res;
        const auto fpp = map_at(p2 + h, p3, fine_steps_);
        const auto fpm = map_at(p2 - h, p3, fine_steps_);
        const auto fqp = map_at(p2, p3 + h, fine_steps_);
        const auto fqm = map_at(p2, p3 - h, fine_steps_);
        const double j11 = (fpp[0] - fpm[0]) / (2.0 * h);
        const double j21 = (fpp[1] - fpm[1]) / (2.0 * h);
        const double j12 = (fqp[0] - fqm[0]) / (2.0 * h);
        const double j22 = (fqp[1] - fqm[1]) / (2.0 * h);
        root.jacobian_det = j11 * j22 - j12 * j21;
        root.caustic = std::fabs(root.jacobian_det) < kCausticThreshold;
        return root;
      }
      const auto fpp = map_at(p2 + h, p3, steps);
      const auto fpm = map_at(p2 - h, p3, steps);
      const auto fqp = map_at(p2, p3 + h, steps);
      const auto fqm = map_at(p2, p3 - h, steps);
      const double j11 = (fpp[0] - fpm[0]) / (2.0 * h);
      const double j21 = (fpp[1] - fpm[1]) / (2.0 * h);
      const double j12 = (fqp[0] - fqm[0]) / (2.0 * h);
      const double j22 = (fqp[1] - fqm[1]) / (2.0 * h);
      const double det = j11 * j22 - j12 * j21;
      if (std::fabs(det) < 1e-14) return std::nullopt;
      double d2 = -(j22 * f[0] - j12 * f[1]) / det;
      double d3 = -(-j21 * f[0] + j11 * f[1]) / det;
      // Damped update: halve the step until the residual does not grow.
      double scale = 1.0;
      bool improved = false;
      for (int cut = 0; cut < 8; ++cut) {
        const auto trial = value(p2 + scale * d2, p3 + scale * d3, steps);
        if (std::max(std::fabs(trial[0]), std::fabs(trial[1])) <
            std::max(std::fabs(f[0]), std::fabs(f[1]))) {
          p2 += scale * d2;
          p3 += scale * d3;
          f = trial;
          improved = true;
          break;
        }
        scale *= 0.5;
      }
      if (!improved) return std::nullopt;
    }
    return std::nullopt;
  }

  FockState initial_;
  DriveProtocol protocol_;
  ModelParams params_;
  ShootingConfig shoot_;
  int scan_steps_ = 0;
  int fine_steps_ = 0;
  std::vector<std::array<double, 2>> grid_;
};

}  // namespace

std::vector<ThreeSiteRoot> shoot_trajectories_three_site(const FockState& initial,
                                                         const FockState& final_state,
                                                         const DriveProtocol& protocol,
                                                         const ModelParams& params,
                                                         const ShootingConfig& shoot,
                                                         const IntegratorConfig& cfg,
                                                         int threads) {
  if (final_state.size() != 3) throw ConfigError("three-site shooting: final state needs 3 sites");
  ThreeSiteScan scan(initial, protocol, params, shoot, cfg, threads);
  return scan.find_roots(final_state, threads);
}

ShootReport classical_shoot_report(const FockState& initial, const DriveProtocol& protocol,
                                   const ModelParams& params, const ShootingConfig& shoot,
                                   const IntegratorConfig& cfg, int threads) {
  const FockBasis basis = build_basis(params);
  ShootReport report;
  TransitionDistribution& dist = report.distribution;
  dist.basis = basis;
  dist.initial = initial;
  dist.provenance = Provenance::ClassicalShoot;
  dist.probabilities.assign(basis.size(), 0.0);
  dist.flags.assign(basis.size(), kBinOk);

  if (params.sites == 2) {
    TwoSiteShooter shooter(initial, protocol, params, shoot, cfg, threads);
    const int bosons = params.bosons;
    std::vector<double> probs(bosons + 1, 0.0);
    std::vector<double> bin_probs(bosons + 1, 0.0);
    std::vector<std::uint8_t> flags(bosons + 1, kBinOk);
    std::vector<std::vector<TwoSiteRoot>> roots(bosons + 1);
    parallel_chunks(bosons + 1, threads, [&](int, long long begin, long long end) {
      for (long long n1 = begin; n1 < end; ++n1) {
        roots[n1] = shooter.roots_for(static_cast<int>(n1));
        bin_probs[n1] = shooter.bin_probability(static_cast<int>(n1));
        for (const TwoSiteRoot& root : roots[n1]) {
          if (root.caustic)
            flags[n1] = kBinCausticUncertain;
          else
            probs[n1] += 1.0 / (kTwoPi * std::fabs(root.derivative));
        }
      }
    });
    report.bin_integrated.assign(basis.size(), 0.0);
    for (int n1 = 0; n1 <= bosons; ++n1) {
      const std::size_t idx = basis.index_of({n1, bosons - n1});
      dist.probabilities[idx] = probs[n1];
      dist.flags[idx] = flags[n1];
      report.bin_integrated[idx] = bin_probs[n1];
      for (const TwoSiteRoot& root : roots[n1]) {
        if (!root.caustic) dist.trajectory_count += 1;
        report.diagnostics.push_back(
            {{n1, bosons - n1},
             {root.phase},
             root.derivative,
             root.caustic ? 0.0 : 1.0 / (kTwoPi * std::fabs(root.derivative)),
             root.caustic});
      }
    }
    return report;
  }

  if (params.sites == 3) {
    // Best effort for the chaotic three-site dynamics: root sets may be
    // incomplete, so the distribution can only underestimate.
    ThreeSiteScan scan(initial, protocol, params, shoot, cfg, threads);
    for (std::size_t idx = 0; idx < basis.size(); ++idx) {
      for (const ThreeSiteRoot& root : scan.find_roots(basis.state(idx), threads)) {
        double weight = 0.0;
        if (root.caustic) {
          dist.flags[idx] = kBinCausticUncertain;
        } else {
          weight = 1.0 / (kTwoPi * kTwoPi * std::fabs(root.jacobian_det));
          dist.probabilities[idx] += weight;
          dist.trajectory_count += 1;
        }
        report.diagnostics.push_back({basis.state(idx),
                                      {root.phase2, root.phase3},
                                      root.jacobian_det,
                                      weight,
                                      root.caustic});
      }
    }
    return report;
  }

  throw ConfigError("classical_transition_shoot supports 2- or 3-site models");
}

TransitionDistribution classical_transition_shoot(const FockState& initial,
                                                  const DriveProtocol& protocol,
                                                  const ModelParams& params,
                                                  const ShootingConfig& shoot,
                                                  const IntegratorConfig& cfg, int threads) {
  return classical_shoot_report(initial, protocol, params, shoot, cfg, threads).distribution;
}

}  // namespace bhwork
