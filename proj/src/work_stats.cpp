#include "bhwork/work_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bhwork/classical.hpp"
#include "bhwork/errors.hpp"
#include "bhwork/parallel.hpp"
#include "bhwork/rng.hpp"

namespace bhwork {

InitialDistribution gibbs_initial(const std::vector<double>& energies, Beta beta) {
  if (energies.empty()) throw std::invalid_argument("gibbs_initial: empty spectrum");
  InitialDistribution out;
  out.provenance = InitialProvenance::QuantumGibbs;
  out.probabilities.assign(energies.size(), 0.0);
  const double e0 = *std::min_element(energies.begin(), energies.end());

  if (beta.ground_state) {
    const double tie = 1e-12 * (1.0 + std::fabs(e0));
    std::size_t ground_count = 0;
    for (double e : energies)
      if (e - e0 <= tie) ++ground_count;
    for (std::size_t m = 0; m < energies.size(); ++m)
      if (energies[m] - e0 <= tie)
        out.probabilities[m] = 1.0 / static_cast<double>(ground_count);
    return out;
  }

  if (beta.value < 0.0) throw ConfigError("gibbs_initial: beta must be >= 0");
  double z = 0.0;
  for (std::size_t m = 0; m < energies.size(); ++m) {
    out.probabilities[m] = std::exp(-beta.value * (energies[m] - e0));
    z += out.probabilities[m];
  }
  for (double& p : out.probabilities) p /= z;
  return out;
}

double weyl_dos_normalization(const ModelParams& params) {
  const int sites = params.sites;
  const double radius = std::sqrt(params.bosons + 0.5 * sites);
  const double pi = 3.14159265358979323846;
  // Area(S^{2L-1}_R) = 2 pi^L R^(2L-1) / (L-1)!
  const double area =
      2.0 * std::pow(pi, sites) * std::pow(radius, 2 * sites - 1) / std::tgamma(sites);
  return std::pow(4.0 / pi, sites) * area;
}

double weyl_energy_offset(const ModelParams& params) {
  return params.interaction * params.bosons + params.interaction * params.sites / 8.0;
}

double WeylDosEstimate::total_integral() const {
  double s = 0.0;
  for (double d : density) s += d;
  return s * bin_width();
}

double WeylDosEstimate::interpolate(double energy) const {
  const int b = bins();
  if (b == 0) return 0.0;
  if (energy < e_min || energy > e_max) return 0.0;
  const double x = (energy - e_min) / bin_width() - 0.5;
  if (x <= 0.0) return density.front();
  if (x >= b - 1) return density.back();
  const int i = static_cast<int>(x);
  const double f = x - i;
  return density[i] * (1.0 - f) + density[i + 1] * f;
}

WeylDosEstimate weyl_dos_mc(const ModelParams& params, double coupling, int bins,
                            long long samples, std::uint64_t seed, int threads) {
  params.validate();
  if (bins < 1) throw ConfigError("dos: bins must be >= 1");
  if (samples < 10000) throw ConfigError("dos: at least 1e4 samples required");

  const int sites = params.sites;
  const double radius = std::sqrt(params.bosons + 0.5 * sites);
  std::vector<double> energies(samples);
  parallel_chunks(samples, threads, [&](int, long long begin, long long end) {
    ComplexVector psi(sites);
    for (long long k = begin; k < end; ++k) {
      NormalSampler gauss(sample_seed(seed, static_cast<std::uint64_t>(k)));
      double r2 = 0.0;
      for (int j = 0; j < sites; ++j) {
        const double q = gauss.next();
        const double p = gauss.next();
        psi[j] = Complex{q, p};
        r2 += q * q + p * p;
      }
      const double scale = radius / std::sqrt(r2);
      for (int j = 0; j < sites; ++j) psi[j] *= scale;
      energies[k] = classical_energy(psi, coupling, params);
    }
  });

  WeylDosEstimate out;
  out.samples = samples;
  out.radius = radius;
  auto [mn, mx] = std::minmax_element(energies.begin(), energies.end());
  out.e_min = *mn;
  out.e_max = *mx;
  if (out.e_max - out.e_min < 1e-12 * (1.0 + std::fabs(out.e_max))) {
    // Energy constant on the sphere (single site): widen to a nominal window
    // placed so the cluster sits strictly inside one bin for any bin count.
    const double center = 0.5 * (out.e_min + out.e_max);
    out.e_min = center - 0.6591549430918953;
    out.e_max = center + 0.3408450569081047;
  }
  out.density.assign(bins, 0.0);
  out.std_error.assign(bins, 0.0);
  const double width = (out.e_max - out.e_min) / bins;
  std::vector<long long> counts(bins, 0);
  for (double e : energies) {
    int i = static_cast<int>((e - out.e_min) / width);
    if (i < 0) i = 0;
    if (i >= bins) i = bins - 1;
    counts[i] += 1;
  }
  const double scale = weyl_dos_normalization(params);
  for (int i = 0; i < bins; ++i) {
    const double p = static_cast<double>(counts[i]) / samples;
    out.density[i] = scale * p / width;
    out.std_error[i] = scale * std::sqrt(p * (1.0 - p) / samples) / width;
  }
  return out;
}

namespace {

// Integral of rho(E) * exp(-beta (E - e_ref)) over [a, b] on the piecewise
// linear density, subdividing at bin centers.
double weighted_window_integral(const WeylDosEstimate& dos, double a, double b, double beta,
                                double e_ref) {
  if (b <= a) return 0.0;
  a = std::max(a, dos.e_min);
  b = std::min(b, dos.e_max);
  if (b <= a) return 0.0;
  std::vector<double> nodes;
  nodes.push_back(a);
  const double width = dos.bin_width();
  const double first_center = dos.e_min + 0.5 * width;
  int i = static_cast<int>(std::ceil((a - first_center) / width));
  for (; first_center + i * width < b; ++i) {
    const double node = first_center + i * width;
    if (node > a) nodes.push_back(node);
  }
  nodes.push_back(b);
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double x0 = nodes[k];
    const double x1 = nodes[k + 1];
    const double g0 = dos.interpolate(x0) * std::exp(-beta * (x0 - e_ref));
    const double g1 = dos.interpolate(x1) * std::exp(-beta * (x1 - e_ref));
    sum += 0.5 * (g0 + g1) * (x1 - x0);
  }
  return sum;
}

}  // namespace

InitialDistribution classical_initial(const WeylDosEstimate& dos,
                                      const std::vector<double>& energies, Beta beta,
                                      double energy_offset) {
  if (energies.empty()) throw std::invalid_argument("classical_initial: empty spectrum");
  const std::size_t m_count = energies.size();
  std::vector<std::size_t> order(m_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return energies[a] < energies[b]; });

  InitialDistribution out;
  out.provenance = InitialProvenance::ClassicalWeyl;
  out.probabilities.assign(m_count, 0.0);

  const double bottom = energies[order.front()] + energy_offset;
  const double top = energies[order.back()] + energy_offset;
  const double slack = 2.0 * dos.bin_width();
  if (bottom < dos.e_min - slack || top > dos.e_max + slack)
    throw ConfigError("classical_initial: density grid does not cover the spectrum range");

  if (beta.ground_state) {
    const double e0 = energies[order.front()];
    const double tie = 1e-12 * (1.0 + std::fabs(e0));
    std::size_t ground_count = 0;
    for (double e : energies)
      if (e - e0 <= tie) ++ground_count;
    for (std::size_t m = 0; m < m_count; ++m)
      if (energies[m] - e0 <= tie)
        out.probabilities[m] = 1.0 / static_cast<double>(ground_count);
    return out;
  }
  if (beta.value < 0.0) throw ConfigError("classical_initial: beta must be >= 0");

  const double e_ref = bottom;
  double z = 0.0;
  for (std::size_t level = 0; level < m_count; ++level) {
    const double lo = energies[order[level]] + energy_offset;
    const double hi =
        (level + 1 < m_count) ? energies[order[level + 1]] + energy_offset : dos.e_max;
    const double w = weighted_window_integral(dos, lo, hi, beta.value, e_ref);
    out.probabilities[order[level]] = w;
    z += w;
  }
  if (z <= 0.0)
    throw ConfigError("classical_initial: zero total weight (density grid mismatch)");
  for (double& p : out.probabilities) p /= z;
  return out;
}

WorkDistribution assemble_work_distribution(const InitialDistribution& initial,
                                            const std::vector<TransitionDistribution>& transitions,
                                            const std::vector<double>& energies_a,
                                            const std::vector<double>& energies_b) {
  const std::size_t m_count = initial.probabilities.size();
  if (energies_a.size() != m_count)
    throw std::invalid_argument("assemble_work_distribution: initial spectrum length mismatch");

  std::vector<WorkPoint> points;
  Provenance provenance = Provenance::Quantum;
  bool provenance_set = false;
  for (std::size_t m = 0; m < m_count; ++m) {
    const double pm = initial.probabilities[m];
    if (pm <= 0.0) continue;
    if (m >= transitions.size() || transitions[m].probabilities.empty())
      throw std::invalid_argument("assemble_work_distribution: missing transition row " +
                                  std::to_string(m));
    const TransitionDistribution& row = transitions[m];
    if (row.probabilities.size() != energies_b.size())
      throw std::invalid_argument("assemble_work_distribution: final spectrum length mismatch");
    if (!provenance_set) {
      provenance = row.provenance;
      provenance_set = true;
    }
    for (std::size_t n = 0; n < row.probabilities.size(); ++n) {
      const double p = pm * row.probabilities[n];
      if (p > 0.0) points.push_back({energies_b[n] - energies_a[m], p});
    }
  }

  std::sort(points.begin(), points.end(),
            [](const WorkPoint& a, const WorkPoint& b) { return a.work < b.work; });
  double max_abs_e = 0.0;
  for (double e : energies_a) max_abs_e = std::max(max_abs_e, std::fabs(e));
  for (double e : energies_b) max_abs_e = std::max(max_abs_e, std::fabs(e));
  const double tol = 1e-9 * std::max(max_abs_e, 1.0);

  WorkDistribution dist;
  dist.provenance = provenance;
  for (const WorkPoint& p : points) {
    if (!dist.support.empty() && p.work - dist.support.back().work <= tol) {
      // Accumulate onto the probability-weighted mean work of the cluster.
      WorkPoint& last = dist.support.back();
      const double total = last.probability + p.probability;
      last.work = (last.work * last.probability + p.work * p.probability) / total;
      last.probability = total;
    } else {
      dist.support.push_back(p);
    }
  }
  return dist;
}

double exp_beta_work(const WorkDistribution& dist, double beta) {
  double s = 0.0;
  for (const WorkPoint& p : dist.support) s += p.probability * std::exp(-beta * p.work);
  return s;
}

double mean_work(const WorkDistribution& dist) {
  double s = 0.0;
  for (const WorkPoint& p : dist.support) s += p.probability * p.work;
  return s;
}

std::vector<double> cumulative(const TransitionDistribution& dist) {
  // Ascending lexicographic occupation order is the reverse of the stored
  // descending basis order.
  const std::size_t dim = dist.probabilities.size();
  std::vector<double> s(dim, 0.0);
  double running = 0.0;
  for (std::size_t l = 0; l < dim; ++l) {
    running += dist.probabilities[dim - 1 - l];
    s[l] = running;
  }
  return s;
}

double rmse(const std::vector<double>& sq, const std::vector<double>& sc) {
  if (sq.size() != sc.size()) throw std::invalid_argument("rmse: length mismatch");
  if (sq.empty()) throw std::invalid_argument("rmse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double d = sq[i] - sc[i];
    sum += d * d;
  }
  return std::sqrt(sum / sq.size());
}

}  // namespace bhwork
