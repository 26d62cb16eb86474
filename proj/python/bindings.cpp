#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rfoc/commands.hpp"
#include "rfoc/config.hpp"
#include "rfoc/simulate.hpp"
#include "rfoc/verify.hpp"

namespace py = pybind11;
using namespace rfoc;

namespace {

ControllerParams pick_controller(const RunConfig& cfg, const std::optional<std::string>& controller) {
  if (controller) return parse_controller_json(*controller, cfg.pins);
  if (cfg.controller) return *cfg.controller;
  throw std::invalid_argument("controller: none given and none in the config");
}

std::string synth(const std::string& config, const std::string& method) {
  const RunConfig cfg = parse_config(config);
  auto adapter = make_adapter(cfg.adapter);
  py::gil_scoped_release nogil;
  return synth_json(synthesize(cfg, method_from_string(method), *adapter));
}

std::string check(const std::string& config, const std::optional<std::string>& controller,
                  std::optional<std::uint64_t> seed) {
  const RunConfig cfg = parse_config(config);
  const ControllerParams k = pick_controller(cfg, controller);
  const UncertainPlant& p = cfg.uncertain_plant();
  py::gil_scoped_release nogil;
  return report_json(verify_specs(p, k, cfg.spec, sample_uncertainty(cfg.samples, seed.value_or(cfg.seed), p), cfg.verify));
}

std::vector<std::complex<double>> poles(const std::vector<double>& a, const std::vector<double>& b,
                                        const std::vector<double>& x_tail, const std::vector<double>& y) {
  const ControllerParams k = controller_from_coeffs(x_tail, y);
  std::vector<double> ac{1.0}, bc{0.0};
  ac.insert(ac.end(), a.begin(), a.end());
  bc.insert(bc.end(), b.begin(), b.end());
  return roots(closed_loop_charpoly(Poly(ac), Poly(bc), k));
}

py::dict simulate(const std::string& config, const std::optional<std::string>& controller) {
  const RunConfig cfg = parse_config(config);
  const ControllerParams k = pick_controller(cfg, controller);
  SimResult r;
  {
    py::gil_scoped_release nogil;
    r = simulate_tracking(cfg.simulation_plant(), k, cfg.reference, cfg.sim_duration(), cfg.dt);
  }
  const TrackingMetrics m = metrics(r, cfg.settle_fraction);
  py::dict d;
  d["t"] = r.t;
  d["r"] = r.r;
  d["y"] = r.y;
  d["e"] = r.e;
  d["rmse"] = m.rmse;
  d["max_abs_error"] = m.max_abs_error;
  d["warning"] = r.warning;
  return d;
}

std::string export_sdpa(const std::string& config, const std::string& method) {
  return to_sdpa(build_problem(parse_config(config), method_from_string(method)).problem);
}

std::string compare(const std::string& config) {
  const RunConfig cfg = parse_config(config);
  auto adapter = make_adapter(cfg.adapter);
  py::gil_scoped_release nogil;
  return compare_json(compare_methods(cfg, *adapter));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fixed-order robust controller synthesis (native core)";
  m.def("synth", &synth, py::arg("config"), py::arg("method") = "proposed");
  m.def("check", &check, py::arg("config"), py::arg("controller") = py::none(), py::arg("seed") = py::none());
  m.def("poles", &poles, py::arg("a"), py::arg("b"), py::arg("x"), py::arg("y"));
  m.def("simulate", &simulate, py::arg("config"), py::arg("controller") = py::none());
  m.def("export_sdpa", &export_sdpa, py::arg("config"), py::arg("method") = "proposed");
  m.def("compare", &compare, py::arg("config"));
}
