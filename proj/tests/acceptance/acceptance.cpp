// Acceptance suite: end-to-end checks of the full pipeline at the production
// parameter scale (U = 5/N, J0 = 5, tau = 10). Each criterion prints one
// PASS/FAIL line; the exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bhwork/classical.hpp"
#include "bhwork/classical_prob.hpp"
#include "bhwork/csv.hpp"
#include "bhwork/parallel.hpp"
#include "bhwork/quantum.hpp"
#include "bhwork/rng.hpp"
#include "bhwork/work_stats.hpp"

using namespace bhwork;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kMasterSeed = 20240811ull;
constexpr long long kMcSamples = 100000;

int g_threads = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Step budget for the refinement loop at production sizes; the loop still
// verifies its own convergence criteria.
IntegratorConfig quantum_integrator(int bosons) {
  IntegratorConfig cfg;
  if (bosons <= 12)
    cfg.base_steps = 4096;
  else if (bosons <= 30)
    cfg.base_steps = 8192;
  else if (bosons <= 60)
    cfg.base_steps = 16384;
  else if (bosons <= 120)
    cfg.base_steps = 32768;
  else
    cfg.base_steps = 65536;
  return cfg;
}

ModelParams production_model(int sites, int bosons) {
  return ModelParams::chain(sites, bosons, 5.0 / bosons);
}

DriveProtocol production_protocol() { return DriveProtocol::parabolic(5.0, 10.0); }

double combined_sigma(double p_a, double p_b, long long n) {
  const double p = std::clamp(std::max({p_a, p_b, 1.0 / n}), 0.0, 0.5);
  return std::sqrt(p * (1.0 - p) / n);
}

// Cached heavy artifacts shared between criteria.
struct SharedRuns {
  std::map<int, QuantumState> quantum_two_site;         // by N; initial |N/2,N/2>
  std::map<int, TransitionDistribution> mc_two_site;    // by N
  std::optional<QuantumState> quantum_three_site;       // N=20, |5,5,10>
  std::optional<TransitionDistribution> mc_three_site;  // N=20
  std::optional<ShootReport> shoot_n100;

  const QuantumState& quantum2(int n) {
    auto it = quantum_two_site.find(n);
    if (it != quantum_two_site.end()) return it->second;
    const auto t0 = Clock::now();
    const ModelParams params = production_model(2, n);
    const FockBasis basis = build_basis(params);
    const SparseHamiltonian h = build_hamiltonian(basis);
    QuantumState state = evolve_quantum(make_fock_state(basis, {n / 2, n / 2}),
                                        production_protocol(), h, quantum_integrator(n));
    std::fprintf(stderr, "  [shared] quantum L=2 N=%d: steps=%d drift=%.2e (%.1fs)\n", n,
                 state.accepted_steps, state.norm_drift, seconds_since(t0));
    return quantum_two_site.emplace(n, std::move(state)).first->second;
  }

  const TransitionDistribution& mc2(int n) {
    auto it = mc_two_site.find(n);
    if (it != mc_two_site.end()) return it->second;
    const auto t0 = Clock::now();
    ClassicalInitialEnsemble ens;
    ens.occupations = {n / 2, n / 2};
    ens.sample_count = kMcSamples;
    ens.master_seed = sample_seed(kMasterSeed, static_cast<std::uint64_t>(n));
    TransitionDistribution dist = classical_transition_mc(
        ens, production_protocol(), production_model(2, n), IntegratorConfig{}, g_threads);
    std::fprintf(stderr, "  [shared] classical MC L=2 N=%d: %lld samples, leak=%.2g (%.1fs)\n",
                 n, dist.sample_count, dist.leakage_fraction, seconds_since(t0));
    return mc_two_site.emplace(n, std::move(dist)).first->second;
  }

  const QuantumState& quantum3() {
    if (!quantum_three_site) {
      const auto t0 = Clock::now();
      const ModelParams params = production_model(3, 20);
      const FockBasis basis = build_basis(params);
      const SparseHamiltonian h = build_hamiltonian(basis);
      quantum_three_site = evolve_quantum(make_fock_state(basis, {5, 5, 10}), production_protocol(),
                                          h, quantum_integrator(20));
      std::fprintf(stderr, "  [shared] quantum L=3 N=20: steps=%d drift=%.2e (%.1fs)\n",
                   quantum_three_site->accepted_steps, quantum_three_site->norm_drift,
                   seconds_since(t0));
    }
    return *quantum_three_site;
  }

  const TransitionDistribution& mc3() {
    if (!mc_three_site) {
      const auto t0 = Clock::now();
      ClassicalInitialEnsemble ens;
      ens.occupations = {5, 5, 10};
      ens.sample_count = kMcSamples;
      ens.master_seed = sample_seed(kMasterSeed, 320ull);
      mc_three_site = classical_transition_mc(ens, production_protocol(), production_model(3, 20),
                                              IntegratorConfig{}, g_threads);
      std::fprintf(stderr, "  [shared] classical MC L=3 N=20: leak=%.2g (%.1fs)\n",
                   mc_three_site->leakage_fraction, seconds_since(t0));
    }
    return *mc_three_site;
  }

  const ShootReport& shoot100() {
    if (!shoot_n100) {
      const auto t0 = Clock::now();
      shoot_n100 = classical_shoot_report({50, 50}, production_protocol(), production_model(2, 100),
                                          ShootingConfig{}, IntegratorConfig{}, g_threads);
      std::fprintf(stderr, "  [shared] shooting L=2 N=100: %lld trajectories (%.1fs)\n",
                   shoot_n100->distribution.trajectory_count, seconds_since(t0));
    }
    return *shoot_n100;
  }
};

SharedRuns g_shared;

TransitionDistribution to_distribution(const QuantumState& state, const FockState& initial) {
  TransitionDistribution dist;
  dist.basis = state.basis;
  dist.initial = initial;
  dist.provenance = Provenance::Quantum;
  dist.probabilities.resize(state.basis.size());
  for (std::size_t k = 0; k < state.basis.size(); ++k)
    dist.probabilities[k] = std::norm(state.coefficients[k]);
  return dist;
}

// Caption-order probabilities (ascending lexicographic final labels).
std::vector<double> label_order(const std::vector<double>& by_basis_index) {
  std::vector<double> out(by_basis_index.rbegin(), by_basis_index.rend());
  return out;
}

// ---------------------------------------------------------------------------

bool criterion_unitarity(std::string& detail) {
  double worst = 0.0;
  for (int n : {10, 50, 100, 200}) worst = std::max(worst, g_shared.quantum2(n).norm_drift);
  worst = std::max(worst, g_shared.quantum3().norm_drift);
  std::ostringstream os;
  os << "max |sum - 1| = " << worst << " (bound 1e-8)";
  detail = os.str();
  return worst <= 1e-8;
}

bool criterion_oracle(std::string& detail) {
  // Exact slice exponentials vs the production integrator on the same
  // staircase drive, across bases of dimension up to 50.
  struct Case {
    int sites, bosons;
  };
  const Case cases[] = {{1, 5}, {2, 5}, {2, 16}, {2, 33}, {2, 49}, {3, 5}, {3, 8}, {4, 4}};
  const int slices = 1024;
  double worst = 0.0;
  for (const Case& c : cases) {
    const ModelParams params = production_model(c.sites, c.bosons);
    const FockBasis basis = build_basis(params);
    if (basis.size() > 50) {
      detail = "internal error: case exceeds dimension 50";
      return false;
    }
    const SparseHamiltonian h = build_hamiltonian(basis);
    FockState initial(c.sites, c.bosons / c.sites);
    initial[0] += c.bosons - (c.bosons / c.sites) * c.sites;

    IntegratorConfig cfg = quantum_integrator(c.bosons);
    cfg.norm_tolerance = 1e-7;
    const DriveProtocol staircase = DriveProtocol::parabolic_staircase(5.0, 10.0, slices);
    const QuantumState got = evolve_quantum(make_fock_state(basis, initial), staircase, h, cfg);

    Eigen::VectorXcd c_ref(basis.size());
    c_ref.setZero();
    c_ref(basis.index_of(initial)) = 1.0;
    const double dt = 10.0 / slices;
    for (int s = 0; s < slices; ++s) {
      const double tm = (s + 0.5) * dt;
      const double coupling = 5.0 * (tm - tm * tm / 10.0);
      Eigen::MatrixXd hm = Eigen::MatrixXd::Zero(basis.size(), basis.size());
      for (std::size_t k = 0; k < basis.size(); ++k) hm(k, k) = h.diagonal[k];
      for (const HoppingTerm& t : h.hopping) hm(t.row, t.col) -= coupling * t.amplitude;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hm);
      Eigen::VectorXcd modes = es.eigenvectors().transpose() * c_ref;
      for (std::size_t k = 0; k < basis.size(); ++k)
        modes(k) *= std::exp(Complex{0.0, -es.eigenvalues()(k) * dt});
      c_ref = es.eigenvectors() * modes;
    }
    double err = 0.0;
    for (std::size_t k = 0; k < basis.size(); ++k)
      err = std::max(err, std::abs(got.coefficients[k] - c_ref(k)));
    worst = std::max(worst, err);
    std::fprintf(stderr, "  [2] L=%d N=%d dim=%zu: max err %.2e\n", c.sites, c.bosons,
                 basis.size(), err);
  }
  std::ostringstream os;
  os << "max coefficient error = " << worst << " (bound 1e-6)";
  detail = os.str();
  return worst <= 1e-6;
}

bool criterion_conservation(std::string& detail) {
  double worst = 0.0;
  for (auto [sites, bosons] : {std::pair{2, 100}, {3, 20}}) {
    const ModelParams params = production_model(sites, bosons);
    ClassicalInitialEnsemble ens;
    ens.occupations.assign(sites, bosons / sites);
    ens.occupations[0] += bosons - (bosons / sites) * sites;
    ens.sample_count = 10000;
    ens.master_seed = sample_seed(kMasterSeed, 77ull + sites);
    std::vector<double> worst_per(resolve_threads(g_threads), 0.0);
    parallel_chunks(ens.sample_count, g_threads, [&](int w, long long b, long long e) {
      for (long long k = b; k < e; ++k) {
        const ClassicalField out = evolve_classical(sample_initial_field(ens, k),
                                                    production_protocol(), params,
                                                    IntegratorConfig{});
        worst_per[w] = std::max(worst_per[w], out.norm_drift);
      }
    });
    for (double w : worst_per) worst = std::max(worst, w);
  }
  std::ostringstream os;
  os << "max relative norm drift over 2x10^4 trajectories = " << worst << " (bound 1e-8)";
  detail = os.str();
  return worst <= 1e-8;
}

bool criterion_mc_shoot(std::string& detail) {
  const TransitionDistribution& mc = g_shared.mc2(100);
  const ShootReport& shoot = g_shared.shoot100();
  int considered = 0, agreed = 0;
  for (std::size_t i = 0; i < mc.probabilities.size(); ++i) {
    if (!shoot.distribution.flags.empty() && shoot.distribution.flags[i] != kBinOk) continue;
    ++considered;
    const double a = mc.probabilities[i];
    const double b = shoot.bin_integrated[i];
    if (std::fabs(a - b) <= 3.0 * combined_sigma(a, b, mc.sample_count) + 1e-9) ++agreed;
  }
  const double fraction = considered ? static_cast<double>(agreed) / considered : 0.0;
  std::ostringstream os;
  os << agreed << "/" << considered << " non-caustic bins within 3 sigma ("
     << 100.0 * fraction << "%, bound 95%)";
  detail = os.str();
  return fraction >= 0.95;
}

bool criterion_envelope(std::string& detail) {
  std::ostringstream os;
  bool ok = true;
  for (int n : {100, 200}) {
    const TransitionDistribution qdist = to_distribution(g_shared.quantum2(n), {n / 2, n / 2});
    const std::vector<double> quantum = label_order(qdist.probabilities);
    const TransitionDistribution& mc = g_shared.mc2(n);
    const std::vector<double> classical = label_order(mc.probabilities);
    const std::vector<double> se = label_order(mc.std_error);

    const int window = 2;
    int inside = 0, interior = 0;
    for (int l = 1; l < n; ++l) {
      double lo = quantum[l], hi = quantum[l];
      for (int w = -window; w <= window; ++w) {
        const int idx = std::clamp(l + w, 0, n);
        lo = std::min(lo, quantum[idx]);
        hi = std::max(hi, quantum[idx]);
      }
      const double slack = 3.0 * se[l] + 1e-9;
      ++interior;
      if (classical[l] >= lo - slack && classical[l] <= hi + slack) ++inside;
    }
    const double fraction = static_cast<double>(inside) / interior;
    os << "N=" << n << ": " << 100.0 * fraction << "% of interior bins enveloped; ";
    if (fraction < 0.80) ok = false;
  }
  os << "(bound 80%)";
  detail = os.str();
  return ok;
}

bool criterion_rmse_trend(std::string& detail) {
  std::map<int, double> r;
  int crossings_100 = 0;
  for (int n : {10, 50, 100, 200}) {
    const TransitionDistribution quantum =
        to_distribution(g_shared.quantum2(n), {n / 2, n / 2});
    const std::vector<double> sq = cumulative(quantum);
    const std::vector<double> sc = cumulative(g_shared.mc2(n));
    r[n] = rmse(sq, sc);
    if (n == 100) {
      // the jagged quantum cumulative should thread through the classical one
      for (std::size_t l = 1; l < sq.size(); ++l)
        if ((sq[l] - sc[l] > 0) != (sq[l - 1] - sc[l - 1] > 0)) ++crossings_100;
    }
  }
  std::ostringstream os;
  os << "R(10)=" << r[10] << " R(50)=" << r[50] << " R(100)=" << r[100]
     << " R(200)=" << r[200] << "; cumulative curves cross " << crossings_100
     << " times at N=100";
  detail = os.str();
  return r[10] > r[50] && r[50] > r[100] && r[100] > r[200] && r[200] < r[10] / 2.0;
}

bool criterion_three_site(std::string& detail) {
  const TransitionDistribution quantum = to_distribution(g_shared.quantum3(), {5, 5, 10});
  const double r = rmse(cumulative(quantum), cumulative(g_shared.mc3()));
  std::ostringstream os;
  os << "RMSE over 231 states = " << r << " (bound 0.05)";
  detail = os.str();
  return r < 0.05;
}

bool criterion_jarzynski(std::string& detail) {
  double worst = 0.0;
  for (auto [sites, bosons] : {std::pair{2, 4}, {2, 10}, {2, 20}, {3, 6}}) {
    const ModelParams params = production_model(sites, bosons);
    const FockBasis basis = build_basis(params);
    std::vector<double> energies(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k)
      energies[k] = interaction_energy(basis.state(k), params.interaction);
    const auto rows =
        quantum_transition_matrix(basis, production_protocol(), quantum_integrator(bosons));
    for (double beta : {0.1, 1.0, 10.0}) {
      const InitialDistribution init = gibbs_initial(energies, Beta::finite(beta));
      const WorkDistribution dist = assemble_work_distribution(init, rows, energies, energies);
      worst = std::max(worst, std::fabs(exp_beta_work(dist, beta) - 1.0));
    }
  }
  std::ostringstream os;
  os << "max |<exp(-beta W)> - 1| = " << worst << " (bound 1e-6)";
  detail = os.str();
  return worst <= 1e-6;
}

bool criterion_dos(std::string& detail) {
  const ModelParams params = production_model(2, 100);
  const WeylDosEstimate dos =
      weyl_dos_mc(params, 0.0, 512, 1000000, sample_seed(kMasterSeed, 9ull), g_threads);
  const double closed_form = weyl_dos_normalization(params);
  const double rel = std::fabs(dos.total_integral() - closed_form) / closed_form;

  const FockBasis basis = build_basis(params);
  std::vector<double> energies(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    energies[k] = interaction_energy(basis.state(k), params.interaction);
  const InitialDistribution quantum = gibbs_initial(energies, Beta::finite(1.0));
  const InitialDistribution classical =
      classical_initial(dos, energies, Beta::finite(1.0), weyl_energy_offset(params));
  double mean_abs = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k)
    mean_abs += std::fabs(quantum.probabilities[k] - classical.probabilities[k]);
  mean_abs /= basis.size();

  std::ostringstream os;
  os << "total-integral relative error = " << rel << " (bound 0.01); initial-distribution "
     << "mean |dP| = " << mean_abs << " (bound 0.02)";
  detail = os.str();
  return rel < 0.01 && mean_abs < 0.02;
}

bool criterion_determinism(const std::string& cli_path, std::string& detail) {
  if (cli_path.empty()) {
    detail = "no --cli path given";
    return false;
  }
  namespace fs = std::filesystem;
  const fs::path work = fs::temp_directory_path() / "bhwork_acceptance_det";
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path cfg_path = work / "config.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({
      "model": {"sites": 2, "bosons": 6, "interaction": "five-over-N"},
      "initial": {"occupations": [3, 3]},
      "methods": ["quantum", "classical-mc", "classical-shoot"],
      "samples": 500,
      "seed": 424242,
      "integrator": {"base_steps": 2048},
      "shooting": {"scan_resolution": 256}
    })";
  }
  auto run = [&](const std::string& out_dir, int threads) {
    std::ostringstream cmd;
    cmd << "\"" << cli_path << "\" transition --config " << cfg_path.string() << " --out "
        << (work / out_dir).string() << " --threads " << threads << " > /dev/null 2>&1";
    return std::system(cmd.str().c_str());
  };
  if (run("a", 2) != 0 || run("b", 2) != 0 || run("c", 1) != 0) {
    detail = "CLI invocation failed";
    return false;
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool ok = true;
  std::ostringstream os;
  for (const char* name : {"transition_quantum.csv", "transition_classical-mc.csv",
                           "transition_classical-shoot.csv", "shoot_diagnostics.csv"}) {
    const std::string a = slurp(work / "a" / name);
    const std::string b = slurp(work / "b" / name);
    const std::string c = slurp(work / "c" / name);
    if (a.empty() || a != b || a != c) {
      ok = false;
      os << name << " differs; ";
    }
  }
  if (ok) os << "quantum, MC, and shooting bodies byte-identical across reruns and thread counts";
  detail = os.str();
  fs::remove_all(work);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli_path;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) cli_path = argv[++i];
    if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
    if (arg == "--threads" && i + 1 < argc) g_threads = std::atoi(argv[++i]);
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "unitarity and normalization", criterion_unitarity},
      {2, "matrix-exponential oracle equivalence", criterion_oracle},
      {3, "classical norm conservation", criterion_conservation},
      {4, "Monte-Carlo vs shooting equivalence", criterion_mc_shoot},
      {5, "classical curve inside quantum envelopes", criterion_envelope},
      {6, "RMSE decreases with particle number", criterion_rmse_trend},
      {7, "three-site cumulative agreement", criterion_three_site},
      {8, "fluctuation identity", criterion_jarzynski},
      {9, "density-of-states normalization and initial distribution", criterion_dos},
      {10, "seeded byte determinism",
       [&](std::string& d) { return criterion_determinism(cli_path, d); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = Clock::now();
    std::string detail;
    bool pass = false;
    try {
      pass = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s -- %s (%.1fs)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  return failures;
}
