#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relcav/cli/config.hpp"
#include "relcav/cli/sweep.hpp"
#include "relcav/field_modes.hpp"
#include "relcav/trajectory.hpp"

namespace py = pybind11;
using namespace relcav;

namespace {

CoefficientCache& shared_cache() {
  static CoefficientCache cache;
  return cache;
}

py::dict to_dict(const SqueezerFit& f) {
  py::dict d;
  d["r"] = f.r;
  d["psi_k"] = f.psi_k;
  d["psi_kp"] = f.psi_kp;
  d["residual"] = f.residual;
  d["operator_residual"] = f.operator_residual;
  return d;
}

py::dict to_dict(const TrajectoryEvaluation& e) {
  py::dict d;
  d["nu_tilde"] = e.report.nu_tilde;
  d["nu_tilde_first_order"] = e.report.nu_tilde_first_order;
  d["log_negativity"] = e.report.log_negativity;
  d["beta_after_repetitions"] = e.beta_after_repetitions;
  d["squeezing_r"] = e.report.squeezing_r;
  d["psi_k"] = e.report.psi_k;
  d["psi_kp"] = e.report.psi_kp;
  d["squeezer_residual"] = e.report.squeezer_residual;
  d["mean_excitations_k"] = e.mean_excitations_k;
  d["mean_excitations_kp"] = e.mean_excitations_kp;
  d["commutator_defect"] = e.commutator.defect;
  d["symplectic"] = e.transform.two_mode.matrix;
  d["truncation_defect"] = e.transform.two_mode.truncation_defect;
  d["warnings"] = e.transform.warnings;
  return d;
}

SampleScenarioParams scenario(double tau, double t, double h, double y, int epsilon, std::pair<int, int> modes,
                              int repetitions, int resonance_order) {
  SampleScenarioParams p;
  p.tau = tau;
  p.t = t;
  p.h = h;
  p.y = y;
  p.epsilon = epsilon;
  p.modes = ModePair(modes.first, modes.second);
  p.repetitions = repetitions;
  p.resonance_order = resonance_order;
  return p;
}

PipelineSettings pipeline(int n_max) {
  PipelineSettings s;
  s.n_max = n_max;
  return s;
}

}  // namespace

PYBIND11_MODULE(_relcav, m) {
  m.doc() = "Bogoliubov coefficients, Gaussian covariance tools and entanglement resonances for accelerated cavities";

  auto error = py::register_exception<Error>(m, "RelcavError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<NumericError>(m, "NumericError", error.ptr());
  py::register_exception<cli::ConfigError>(m, "ConfigError", error.ptr());

  py::class_<CavityGeometry>(m, "CavityGeometry")
      .def(py::init([](double length, double h, double mass) { return CavityGeometry::from_length(length, h, mass); }),
           py::arg("length") = 1.0, py::arg("h") = 0.0, py::arg("mass") = 0.0)
      .def_static("from_walls", &CavityGeometry::from_walls, py::arg("x_a"), py::arg("x_b"), py::arg("mass") = 0.0)
      .def_property_readonly("length", &CavityGeometry::length)
      .def_property_readonly("h", &CavityGeometry::h)
      .def_property_readonly("mass", &CavityGeometry::mass)
      .def_property_readonly("x_a", &CavityGeometry::x_a)
      .def_property_readonly("x_b", &CavityGeometry::x_b)
      .def("__repr__", [](const CavityGeometry& g) {
        return "CavityGeometry(length=" + std::to_string(g.length()) + ", h=" + std::to_string(g.h()) + ")";
      });

  m.def("minkowski_frequency", [](int k, const CavityGeometry& g) { return minkowski_frequency(ModeIndex(k), g); });
  m.def("rindler_frequency", [](int k, const CavityGeometry& g) { return rindler_frequency(ModeIndex(k), g); });

  m.def(
      "junction_coefficients",
      [](double length, double h, int n_max) {
        const auto b = shared_cache().junction(length, h, n_max);
        return py::make_tuple(b.alpha, b.beta);
      },
      py::arg("length"), py::arg("h"), py::arg("n_max") = 40,
      "Inertial-to-accelerated junction block (alpha, beta); negative h mirrors.");
  m.def(
      "first_order_coefficients",
      [](double length, int n_max, double h0) {
        ExtractionSettings s;
        s.h0 = h0;
        const auto c = first_order_coefficients(CavityGeometry::from_length(length, 0.0), n_max, s);
        return py::make_tuple(c.alpha1, c.beta1);
      },
      py::arg("length") = 1.0, py::arg("n_max") = 40, py::arg("h0") = 1e-3,
      "Richardson-extracted (alpha1, beta1) per unit h.");
  m.def("mode_coupling", [](int k, int kp) { return mode_coupling(ModePair(k, kp)); });
  m.def(
      "resonance_time",
      [](int k, int kp, int n, double length) {
        return resonance_time(ModePair(k, kp), CavityGeometry::from_length(length, 0.0), n);
      },
      py::arg("k"), py::arg("kp"), py::arg("n") = 1, py::arg("length") = 1.0);

  m.def("two_mode_squeezer", &two_mode_squeezer, py::arg("r"));
  m.def("local_rotation", &local_rotation, py::arg("psi_k"), py::arg("psi_kp"));
  m.def("symplectic_form", &symplectic_form, py::arg("modes"));
  m.def("symplectic_eigenvalues", &symplectic_eigenvalues, py::arg("sigma"));
  m.def("smallest_pt_eigenvalue", &smallest_pt_eigenvalue, py::arg("sigma"));
  m.def("log_negativity", &log_negativity, py::arg("sigma"));
  m.def("partial_transpose", &partial_transpose, py::arg("sigma"));
  m.def("squeezer_decompose", [](const RealMatrix& s) { return to_dict(squeezer_decompose(s)); }, py::arg("s"));

  m.def(
      "sample_scenario_B1",
      [](double tau, double t, double h, double y, int epsilon, std::pair<int, int> modes, double length) {
        return sample_scenario_B1(scenario(tau, t, h, y, epsilon, modes, 1, 1), CavityGeometry::from_length(length, 0.0));
      },
      py::arg("tau"), py::arg("t"), py::arg("h") = 1e-4, py::arg("y") = 1.0, py::arg("epsilon") = 1,
      py::arg("modes") = std::pair{1, 2}, py::arg("length") = 1.0);
  m.def(
      "sample_scenario_logneg",
      [](double tau, double t, double h, double y, int epsilon, std::pair<int, int> modes, int repetitions, int n,
         double length) {
        return sample_scenario_logneg(scenario(tau, t, h, y, epsilon, modes, repetitions, n),
                                      CavityGeometry::from_length(length, 0.0));
      },
      py::arg("tau"), py::arg("t"), py::arg("h") = 1e-4, py::arg("y") = 1.0, py::arg("epsilon") = 1,
      py::arg("modes") = std::pair{1, 2}, py::arg("repetitions") = 1, py::arg("n") = 1, py::arg("length") = 1.0);

  m.def(
      "evaluate_scenario",
      [](double tau, double t, double h, double y, int epsilon, std::pair<int, int> modes, int repetitions,
         double length, int n_max) {
        const auto p = scenario(tau, t, h, y, epsilon, modes, repetitions, 1);
        return to_dict(evaluate_trajectory(p.trajectory(), CavityGeometry::from_length(length, std::abs(h)), p.modes,
                                           shared_cache(), pipeline(n_max)));
      },
      py::arg("tau"), py::arg("t"), py::arg("h") = 1e-4, py::arg("y") = 1.0, py::arg("epsilon") = 1,
      py::arg("modes") = std::pair{1, 2}, py::arg("repetitions") = 1, py::arg("length") = 1.0, py::arg("n_max") = 40,
      "Two-burn sample scenario through the full pipeline.");
  m.def(
      "evaluate_segments",
      [](const std::vector<std::pair<double, double>>& segments, std::pair<int, int> modes, int repetitions,
         double length, int n_max) {
        std::vector<TrajectorySegment> segs;
        double h = 0.0;
        for (auto [duration, hs] : segments) {
          segs.push_back(hs == 0.0 ? TrajectorySegment::coast(duration) : TrajectorySegment::burn(duration, hs));
          h = std::max(h, std::abs(hs));
        }
        return to_dict(evaluate_trajectory(Trajectory(segs, repetitions), CavityGeometry::from_length(length, h),
                                           ModePair(modes.first, modes.second), shared_cache(), pipeline(n_max)));
      },
      py::arg("segments"), py::arg("modes") = std::pair{1, 2}, py::arg("repetitions") = 1, py::arg("length") = 1.0,
      py::arg("n_max") = 40, "Segments are (duration, h) pairs; h = 0 is a coast.");

  m.def(
      "load_config",
      [](const std::string& path) {
        const auto cfg = cli::load_config(path);
        py::dict d;
        d["echo"] = cli::echo_config(cfg);
        d["hash"] = cli::config_hash(cfg);
        d["warnings"] = cfg.warnings;
        return d;
      },
      py::arg("path"), "Validate a YAML run config; returns its canonical echo, hash and warnings.");
  m.def(
      "run_sweep",
      [](const std::string& path, int workers) {
        const auto cfg = cli::load_config(path);
        cli::SweepResult res;
        {
          py::gil_scoped_release release;
          res = cli::run_sweep(cfg, shared_cache(), workers);
        }
        py::dict d;
        d["tau"] = res.tau;
        d["t"] = res.t;
        d["nu_tilde_first_order"] = res.nu_tilde_first_order;
        d["log_negativity"] = res.log_negativity;
        d["commutator_defect"] = res.commutator_defect;
        d["failures"] = res.failures;
        d["config_hash"] = res.config_hash;
        return d;
      },
      py::arg("path"), py::arg("workers") = 1);

  m.attr("__version__") = cli::tool_version();
}
