#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlqw/commands.hpp"
#include "nlqw/errors.hpp"
#include "nlqw/scattering.hpp"
#include "nlqw/spectral.hpp"
#include "nlqw/wlt.hpp"

namespace py = pybind11;
using namespace nlqw;

namespace {

py::object to_python(const nlohmann::json& value) {
  return py::module_::import("json").attr("loads")(value.dump());
}

LatticeState state_from_sites(Site window_min, const std::vector<std::pair<Complex, Complex>>& sites) {
  std::vector<Spinor> amps;
  amps.reserve(sites.size());
  for (const auto& [up, down] : sites) amps.push_back({up, down});
  return LatticeState(window_min, std::move(amps));
}

std::vector<std::pair<Complex, Complex>> sites_of(const LatticeState& u) {
  std::vector<std::pair<Complex, Complex>> out;
  for (const auto& s : u.amplitudes()) out.emplace_back(s.up, s.down);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nonlinear quantum walk core";

  static PyObject* error = py::exception<Error>(m, "Error", PyExc_RuntimeError).ptr();
  py::register_exception<NotNormalized>(m, "NotNormalized", error);
  py::register_exception<InvalidCoin>(m, "InvalidCoin", error);
  py::register_exception<DegenerateCoin>(m, "DegenerateCoin", error);
  py::register_exception<OutOfRange>(m, "OutOfRange", error);
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      std::string text = e.what();
      for (const auto& v : e.violations()) text += "\n  " + v;
      PyErr_SetString(error, text.c_str());
    }
  });

  py::class_<BaseCoin>(m, "BaseCoin")
      .def(py::init(&BaseCoin::make), py::arg("a"), py::arg("b"))
      .def_static("hadamard_like", &BaseCoin::hadamard_like)
      .def_property_readonly("a", &BaseCoin::a)
      .def_property_readonly("b", &BaseCoin::b)
      .def_property_readonly("abs_a", &BaseCoin::abs_a)
      .def_property_readonly("theta_a", &BaseCoin::theta_a)
      .def("__eq__", [](const BaseCoin& x, const BaseCoin& y) { return x == y; });

  py::enum_<CoinFamily>(m, "CoinFamily")
      .value("linear", CoinFamily::linear)
      .value("scalar_phase", CoinFamily::scalar_phase)
      .value("diagonal_phase", CoinFamily::diagonal_phase);

  py::class_<NonlinearCoinModel>(m, "NonlinearCoinModel")
      .def(py::init([](const BaseCoin& base, CoinFamily family, int m_exp, double kappa, double g) {
             return NonlinearCoinModel{base, family, m_exp, kappa, g};
           }),
           py::arg("base"), py::arg("family") = CoinFamily::linear, py::arg("m") = 2, py::arg("kappa") = 1.0,
           py::arg("g") = 0.0)
      .def_readwrite("base", &NonlinearCoinModel::base)
      .def_readwrite("family", &NonlinearCoinModel::family)
      .def_readwrite("m", &NonlinearCoinModel::exponent_m)
      .def_readwrite("kappa", &NonlinearCoinModel::strength_kappa)
      .def_readwrite("g", &NonlinearCoinModel::coupling_g)
      .def("acts_linearly", &NonlinearCoinModel::acts_linearly);

  py::class_<LatticeState>(m, "LatticeState")
      .def(py::init(&state_from_sites), py::arg("window_min"), py::arg("sites"))
      .def_static("delta",
                  [](Site x, Complex up, Complex down) { return LatticeState::delta(x, {up, down}); },
                  py::arg("x"), py::arg("up"), py::arg("down"))
      .def_property_readonly("window_min", &LatticeState::window_min)
      .def_property_readonly("window_max", &LatticeState::window_max)
      .def_property_readonly("sites", &sites_of)
      .def("at", [](const LatticeState& u, Site x) { const auto s = u.at(x); return std::pair{s.up, s.down}; })
      .def("norm", [](const LatticeState& u) { return norm_l2(u); })
      .def("__len__", &LatticeState::size)
      .def("__eq__", [](const LatticeState& u, const LatticeState& v) { return u == v; });

  m.def("position_distribution", &position_distribution);
  m.def("evolve", [](const NonlinearCoinModel& model, const LatticeState& u0, int T) {
    return evolve(WalkConfig{model, u0, T});
  }, py::arg("model"), py::arg("initial"), py::arg("T"));

  py::class_<DefectSample>(m, "DefectSample")
      .def_readonly("T", &DefectSample::T)
      .def_readonly("defect", &DefectSample::defect);
  py::class_<ScatteringResult>(m, "ScatteringResult")
      .def_readonly("u_plus", &ScatteringResult::u_plus)
      .def_readonly("trace", &ScatteringResult::trace)
      .def_readonly("converged", &ScatteringResult::converged)
      .def_readonly("final_T", &ScatteringResult::final_T)
      .def_readonly("tail_mass", &ScatteringResult::tail_mass);
  m.def("extract_asymptotic", &extract_asymptotic, py::arg("initial"), py::arg("model"), py::arg("tol") = 1e-6,
        py::arg("t_max") = 4096);

  m.def("eigenpair", [](const BaseCoin& coin, double k, int band) {
    const auto e = eigenpair(coin, k, band);
    return py::make_tuple(e.lambda, std::pair{e.phi.up, e.phi.down});
  }, py::arg("coin"), py::arg("k"), py::arg("band"));
  m.def("group_velocity", &group_velocity, py::arg("coin"), py::arg("k"), py::arg("band"));
  m.def("konno_density", &konno_density, py::arg("v"), py::arg("r"));
  m.def("k_branch", &k_branch, py::arg("v"), py::arg("band"), py::arg("branch"), py::arg("coin"));

  py::class_<VelocityDensity>(m, "VelocityDensity")
      .def_readonly("grid", &VelocityDensity::grid)
      .def_readonly("w", &VelocityDensity::w)
      .def_readonly("f_k", &VelocityDensity::f_k)
      .def_readonly("density", &VelocityDensity::density)
      .def_readonly("quad_weight", &VelocityDensity::quad_weight)
      .def_readonly("total_mass", &VelocityDensity::total_mass)
      .def_readonly("mass_check_passed", &VelocityDensity::mass_check_passed);
  m.def("limit_density", &limit_density, py::arg("u_plus"), py::arg("coin"),
        py::arg("n_nodes") = kDefaultDensityNodes, py::arg("max_nodes") = 16 * kDefaultDensityNodes);
  m.def("density_moment", &density_moment);

  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_property_readonly("ks", [](const ConvergenceReport& r) {
        std::vector<std::pair<int, double>> out;
        for (const auto& row : r.rows) out.emplace_back(row.t, row.ks);
        return out;
      })
      .def_property_readonly("charfn_sup_err", [](const ConvergenceReport& r) {
        std::vector<double> out;
        for (const auto& row : r.rows) out.push_back(row.charfn_sup_err);
        return out;
      })
      .def_readonly("ks_trend_ok", &ConvergenceReport::ks_trend_ok)
      .def_readonly("charfn_trend_ok", &ConvergenceReport::charfn_trend_ok)
      .def_readonly("annotations", &ConvergenceReport::annotations)
      .def_property_readonly("csv", &report_csv);
  m.def("verify", [](const NonlinearCoinModel& model, const LatticeState& u0, std::vector<int> checkpoints,
                     double tol, int t_max) {
    VerifyOptions options;
    options.checkpoints = std::move(checkpoints);
    options.scatter_tol = tol;
    options.t_max = t_max;
    return verify(WalkConfig{model, u0, 0}, options);
  }, py::arg("model"), py::arg("initial"), py::arg("checkpoints") = VerifyOptions{}.checkpoints,
        py::arg("tol") = 1e-6, py::arg("t_max") = 4096);

  m.def("parse_config", [](const std::string& text) { return to_python(config_to_json(parse_config(text))); });
  m.def("run_evolve", [](const std::string& text) { return to_python(run_evolve(parse_config(text))); });
  m.def("run_scatter", [](const std::string& text) { return to_python(run_scatter(parse_config(text))); });
  m.def("run_density", [](const std::string& text) { return to_python(run_density(parse_config(text))); });
  m.def("run_verify", [](const std::string& text) { return to_python(run_verify(parse_config(text))); });
}
