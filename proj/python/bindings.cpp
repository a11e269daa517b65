#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bhwork/classical.hpp"
#include "bhwork/classical_prob.hpp"
#include "bhwork/errors.hpp"
#include "bhwork/fock.hpp"
#include "bhwork/quantum.hpp"
#include "bhwork/work_stats.hpp"

namespace py = pybind11;
using namespace bhwork;

namespace {

IntegratorConfig integrator_from(int base_steps, double norm_tolerance, int max_refinements) {
  IntegratorConfig cfg;
  cfg.base_steps = base_steps;
  cfg.norm_tolerance = norm_tolerance;
  cfg.max_refinements = max_refinements;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum and classical work statistics for driven Bose-Hubbard chains";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<ConvergenceError>(m, "ConvergenceError");
  py::register_exception<CapExceededError>(m, "CapExceededError");

  py::enum_<Boundary>(m, "Boundary")
      .value("OPEN", Boundary::Open)
      .value("PERIODIC", Boundary::Periodic);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](int sites, int bosons, double interaction) {
             return ModelParams::chain(sites, bosons, interaction);
           }),
           py::arg("sites"), py::arg("bosons"), py::arg("interaction"))
      .def_readonly("sites", &ModelParams::sites)
      .def_readonly("bosons", &ModelParams::bosons)
      .def_readonly("interaction", &ModelParams::interaction)
      .def_readonly("boundary", &ModelParams::boundary);

  py::class_<FockBasis>(m, "FockBasis")
      .def("__len__", &FockBasis::size)
      .def("states", &FockBasis::states)
      .def("state", &FockBasis::state, py::arg("index"))
      .def("index_of", &FockBasis::index_of, py::arg("occupations"))
      .def("contains", &FockBasis::contains, py::arg("occupations"));

  m.def("build_basis", &build_basis, py::arg("params"),
        py::arg("max_states") = kDefaultBasisCap);

  m.def(
      "dense_spectrum",
      [](const ModelParams& params, double coupling, std::size_t cap) {
        const FockBasis basis = build_basis(params);
        return dense_spectrum(build_hamiltonian(basis), coupling, cap);
      },
      py::arg("params"), py::arg("coupling"), py::arg("dense_cap") = kDefaultDenseCap,
      "All eigenvalues of H(J), ascending");

  py::class_<DriveProtocol>(m, "DriveProtocol")
      .def_static("parabolic", &DriveProtocol::parabolic, py::arg("j0"), py::arg("tau"))
      .def("value_at", &DriveProtocol::value_at, py::arg("t"))
      .def("integral", &DriveProtocol::integral)
      .def_readonly("amplitude", &DriveProtocol::amplitude)
      .def_readonly("duration", &DriveProtocol::duration);

  py::class_<TransitionDistribution>(m, "TransitionDistribution")
      .def_readonly("initial", &TransitionDistribution::initial)
      .def_readonly("probabilities", &TransitionDistribution::probabilities)
      .def_readonly("std_error", &TransitionDistribution::std_error)
      .def_readonly("sample_count", &TransitionDistribution::sample_count)
      .def_readonly("trajectory_count", &TransitionDistribution::trajectory_count)
      .def_readonly("leakage_fraction", &TransitionDistribution::leakage_fraction)
      .def_readonly("leakage_warning", &TransitionDistribution::leakage_warning)
      .def_property_readonly("basis",
                             [](const TransitionDistribution& d) { return d.basis; })
      .def_property_readonly("provenance",
                             [](const TransitionDistribution& d) {
                               return provenance_name(d.provenance);
                             })
      .def("total", &TransitionDistribution::total);

  m.def(
      "quantum_transition",
      [](const FockState& initial, const DriveProtocol& protocol, const ModelParams& params,
         int base_steps, double norm_tolerance, int max_refinements) {
        return quantum_transition_probs(initial, protocol, params,
                                        integrator_from(base_steps, norm_tolerance,
                                                        max_refinements));
      },
      py::arg("initial"), py::arg("protocol"), py::arg("params"),
      py::arg("base_steps") = 4096, py::arg("norm_tolerance") = 1e-8,
      py::arg("max_refinements") = 8,
      "Transition probabilities |c_n(tau)|^2 from one initial Fock state");

  m.def(
      "classical_transition_mc",
      [](const FockState& initial, const DriveProtocol& protocol, const ModelParams& params,
         long long samples, std::uint64_t seed, int threads, int base_steps,
         double norm_tolerance, int max_refinements) {
        ClassicalInitialEnsemble ens;
        ens.occupations = initial;
        ens.sample_count = samples;
        ens.master_seed = seed;
        return classical_transition_mc(ens, protocol, params,
                                       integrator_from(base_steps, norm_tolerance,
                                                       max_refinements),
                                       threads);
      },
      py::arg("initial"), py::arg("protocol"), py::arg("params"), py::arg("samples") = 100000,
      py::arg("seed") = 1, py::arg("threads") = 0, py::arg("base_steps") = 4096,
      py::arg("norm_tolerance") = 1e-8, py::arg("max_refinements") = 8,
      "Phase-ensemble Monte-Carlo transition probabilities");

  m.def(
      "classical_transition_shoot",
      [](const FockState& initial, const DriveProtocol& protocol, const ModelParams& params,
         int scan_resolution, double root_tolerance, int threads, int base_steps) {
        ShootingConfig shoot;
        shoot.scan_resolution = scan_resolution;
        shoot.root_tolerance = root_tolerance;
        IntegratorConfig cfg;
        cfg.base_steps = base_steps;
        return classical_transition_shoot(initial, protocol, params, shoot, cfg, threads);
      },
      py::arg("initial"), py::arg("protocol"), py::arg("params"),
      py::arg("scan_resolution") = 4096, py::arg("root_tolerance") = 1e-9,
      py::arg("threads") = 0, py::arg("base_steps") = 4096,
      "Trajectory-sum transition probabilities from the boundary-value search");

  m.def("cumulative", &cumulative, py::arg("distribution"),
        "Cumulative probabilities over ascending occupation labels");
  m.def("rmse", &rmse, py::arg("sq"), py::arg("sc"));

  m.def(
      "weyl_dos",
      [](const ModelParams& params, double coupling, int bins, long long samples,
         std::uint64_t seed, int threads) {
        const WeylDosEstimate dos = weyl_dos_mc(params, coupling, bins, samples, seed, threads);
        std::vector<double> centers(dos.bins());
        for (int i = 0; i < dos.bins(); ++i) centers[i] = dos.bin_center(i);
        py::dict out;
        out["energy"] = centers;
        out["density"] = dos.density;
        out["std_error"] = dos.std_error;
        out["total_integral"] = dos.total_integral();
        return out;
      },
      py::arg("params"), py::arg("coupling") = 0.0, py::arg("bins") = 512,
      py::arg("samples") = 1000000, py::arg("seed") = 1, py::arg("threads") = 0,
      "Monte-Carlo estimate of the smooth density of states");

  m.def(
      "quantum_work_distribution",
      [](const ModelParams& params, const DriveProtocol& protocol, py::object beta,
         py::object initial, int base_steps) {
        const FockBasis basis = build_basis(params);
        std::vector<double> energies(basis.size());
        for (std::size_t k = 0; k < basis.size(); ++k)
          energies[k] = interaction_energy(basis.state(k), params.interaction);

        InitialDistribution init;
        if (!initial.is_none()) {
          init.provenance = InitialProvenance::Deterministic;
          init.probabilities.assign(basis.size(), 0.0);
          init.probabilities[basis.index_of(initial.cast<FockState>())] = 1.0;
        } else if (!beta.is_none()) {
          init = gibbs_initial(energies, Beta::finite(beta.cast<double>()));
        } else {
          throw ConfigError("give either beta or an initial occupation vector");
        }

        IntegratorConfig cfg;
        cfg.base_steps = base_steps;
        std::vector<TransitionDistribution> rows(basis.size());
        for (std::size_t mrow = 0; mrow < basis.size(); ++mrow)
          if (init.probabilities[mrow] > 0.0)
            rows[mrow] = quantum_transition_probs(basis.state(mrow), protocol, params, cfg);
        const WorkDistribution dist =
            assemble_work_distribution(init, rows, energies, energies);
        std::vector<double> work, prob;
        for (const WorkPoint& p : dist.support) {
          work.push_back(p.work);
          prob.push_back(p.probability);
        }
        py::dict out;
        out["work"] = work;
        out["probability"] = prob;
        if (!beta.is_none())
          out["exp_beta_work"] = exp_beta_work(dist, beta.cast<double>());
        return out;
      },
      py::arg("params"), py::arg("protocol"), py::arg("beta") = py::none(),
      py::arg("initial") = py::none(), py::arg("base_steps") = 4096,
      "Two-point work distribution for a thermal or deterministic initial state");

  m.attr("__version__") = "0.1.0";
}
