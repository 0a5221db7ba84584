#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "huntil/config.hpp"
#include "huntil/report.hpp"

namespace py = pybind11;
using namespace huntil;

namespace {

SimBudget budget_from(double t_max, int j_max, int branches) {
  SimBudget b;
  b.t_max = t_max;
  b.j_max = j_max;
  b.branch_max = branches;
  return b;
}

std::string simulate_json(const std::string& scenario, const std::vector<double>& x0,
                          double t_max, int j_max, int branches,
                          const std::string& policy) {
  Scenario sc = resolve_scenario(scenario);
  auto arcs = simulate(sc.H, x0, budget_from(t_max, j_max, branches),
                       policy == "jump-priority" ? BranchPolicy::JumpPriority
                                                 : BranchPolicy::Branch);
  Json j;
  j["scenario"] = sc.id;
  Json ja = Json::array();
  for (const auto& a : arcs) ja.push_back(arc_summary_json(a));
  j["arcs"] = ja;
  return report_body(j);
}

std::string monitor_json(const std::string& scenario, const std::string& mode,
                         int grid_res, double t_max, int j_max, int branches) {
  Scenario sc = resolve_scenario(scenario);
  AggregateVerdict agg = check_formula_over(
      sc.H, sc.pq, GridSpec{sc.H.bounding_box, grid_res, 2},
      mode == "strong" ? UntilMode::Strong : UntilMode::Weak,
      budget_from(t_max, j_max, branches));
  Json j = to_json(agg);
  j["scenario"] = sc.id;
  j["mode"] = mode;
  return report_body(j);
}

std::string certify_json(const std::string& scenario, const std::string& theorem,
                         const std::string& variant, int grid_res) {
  Scenario sc = resolve_scenario(scenario);
  CertifyOptions opt;
  opt.cfg.grid = GridSpec{sc.H.bounding_box, grid_res, 4};
  UntilCertReport rep;
  auto var = variant == "3a"   ? PreEciVariant::V3a
             : variant == "3b" ? PreEciVariant::V3b
             : variant == "3c" ? PreEciVariant::V3c
                               : PreEciVariant::V3d;
  if (theorem == "weak") {
    rep = certify_weak_until(sc.H, sc.pq, sc.weak_B, opt);
  } else if (theorem == "strong-eci") {
    rep = certify_strong_until_ECI(sc.H, sc.pq, sc.weak_B, sc.v.value(),
                                   sc.w.value(), var, opt);
  } else if (theorem == "strong-eci-flows") {
    rep = certify_strong_until_ECI_flows(sc.H, sc.pq, sc.weak_B, sc.v.value(), opt);
  } else if (theorem == "strong-eci-jumps") {
    rep = certify_strong_until_ECI_jumps(sc.H, sc.pq, sc.weak_B, sc.w.value(), opt);
  } else if (theorem == "strong-fta") {
    const auto& f = sc.fta.value();
    rep = certify_strong_until_FTA(sc.H, sc.pq, sc.weak_B, f.V, f.W, f.c1, f.c2,
                                   f.c, f.N, f.r, opt);
  } else {
    throw std::invalid_argument("unknown theorem: " + theorem);
  }
  Json j = to_json(rep);
  j["scenario"] = sc.id;
  j["theorem"] = theorem;
  return report_body(j);
}

std::string trajectory_dsv_py(const std::string& scenario,
                              const std::vector<double>& x0, double t_max,
                              int j_max) {
  Scenario sc = resolve_scenario(scenario);
  auto arcs = simulate(sc.H, x0, budget_from(t_max, j_max, 1),
                       BranchPolicy::JumpPriority);
  return trajectory_dsv(sc.H, arcs.front());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "hybrid-system until-formula monitoring and certification";
  m.def("list_scenarios", &scenario_ids, "bundled scenario ids");
  m.def("simulate_json", &simulate_json, py::arg("scenario"), py::arg("x0"),
        py::arg("t_max") = 20.0, py::arg("j_max") = 50, py::arg("branches") = 8,
        py::arg("policy") = "branch",
        "simulate all retained branches; returns a JSON report string");
  m.def("monitor_json", &monitor_json, py::arg("scenario"), py::arg("mode"),
        py::arg("grid_res") = 20, py::arg("t_max") = 20.0, py::arg("j_max") = 50,
        py::arg("branches") = 8,
        "evaluate the until formula over sampled initial conditions");
  m.def("certify_json", &certify_json, py::arg("scenario"), py::arg("theorem"),
        py::arg("variant") = "3d", py::arg("grid_res") = 48,
        "run a certificate route; returns a JSON report string");
  m.def("trajectory_dsv", &trajectory_dsv_py, py::arg("scenario"), py::arg("x0"),
        py::arg("t_max") = 20.0, py::arg("j_max") = 50,
        "single-branch trajectory export as delimiter-separated text");
}
