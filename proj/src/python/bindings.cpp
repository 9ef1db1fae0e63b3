// Copyright 2026 The numflow Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "numflow/errors.hpp"
#include "numflow/experiment.hpp"
#include "numflow/io.hpp"
#include "numflow/multipath.hpp"
#include "numflow/oracle.hpp"
#include "numflow/projection.hpp"
#include "numflow/pwl.hpp"
#include "numflow/solvers.hpp"

namespace py = pybind11;
using namespace numflow;

namespace {

Instance parse_instance(const std::string& text) { return instance_from_json(Json::parse(text)); }

std::vector<std::vector<int>> routing_columns(const RoutingMatrix& r) {
  std::vector<std::vector<int>> cols;
  for (int j = 0; j < r.cols(); ++j) cols.push_back(r.column(j));
  return cols;
}

}  // namespace

PYBIND11_MODULE(_numflow, m) {
  m.doc() = "Flow-class network utility maximization";
  m.attr("__version__") = kVersion;

  // Messages carry the error-code name as a prefix.
  py::register_exception<Error>(m, "NumflowError", PyExc_RuntimeError);

  py::class_<Network>(m, "Network")
      .def_property_readonly("node_count", &Network::node_count)
      .def_property_readonly("link_count", &Network::link_count)
      .def_property_readonly("capacities", &Network::capacities)
      .def_property_readonly("gateways", &Network::gateways)
      .def("to_json", [](const Network& n) { return to_json(n).dump(); });

  m.def("small_topology", &small_topology);
  m.def("iridium_topology", &iridium_topology);
  m.def("load_topology", &load_topology, py::arg("topology"));

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("class_count", &Instance::class_count)
      .def_property_readonly("flow_count", &Instance::flow_count)
      .def_property_readonly("paths_per_class", [](const Instance& i) { return i.paths_per_class; })
      .def_property_readonly("seed", [](const Instance& i) { return i.seed; })
      .def_property_readonly("network", [](const Instance& i) { return i.network; })
      .def_property_readonly("routing_columns",
                             [](const Instance& i) { return routing_columns(i.routing); })
      .def("to_json", [](const Instance& i) { return to_json(i).dump(); })
      .def_static("from_json", &parse_instance, py::arg("text"))
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; });

  m.def("gen_instance",
        [](const Network& net, int n, std::uint64_t seed, const std::string& family,
           double exponent, int paths) {
          GenOptions g;
          if (family == "power") {
            g.family = UtilityTag::kNegPower;
            g.exponent = exponent;
          } else if (family != "log") {
            throw Error(ErrorCode::kInvalidParams, "family must be 'log' or 'power'");
          }
          g.endpoints = net.gateways().empty() ? EndpointRule::kAllPairs
                                               : EndpointRule::kGatewayConstrained;
          return paths > 1 ? gen_multipath_instance(net, n, paths, seed, g)
                           : gen_instance(net, n, seed, g);
        },
        py::arg("network"), py::arg("n"), py::arg("seed"), py::arg("family") = "log",
        py::arg("exponent") = 1.0, py::arg("paths") = 1);
  m.def("experiment_instance", &experiment_instance, py::arg("network"), py::arg("seed"),
        py::arg("n"));

  py::class_<SolverParams>(m, "SolverParams")
      .def(py::init<>())
      .def_readwrite("r", &SolverParams::r)
      .def_readwrite("pct", &SolverParams::pct)
      .def_readwrite("alpha", &SolverParams::alpha)
      .def_readwrite("sigma", &SolverParams::sigma)
      .def_readwrite("tau", &SolverParams::tau)
      .def_readwrite("theta", &SolverParams::theta)
      .def_readwrite("max_iter", &SolverParams::max_iter)
      .def_readwrite("tol", &SolverParams::tol)
      .def("validate", &SolverParams::validate);

  py::class_<Solution>(m, "Solution")
      .def_readonly("solver", &Solution::solver)
      .def_readonly("x", &Solution::x)
      .def_readonly("u", &Solution::u)
      .def_readonly("lambda_", &Solution::lambda)
      .def_readonly("rho", &Solution::rho)
      .def_readonly("objective", &Solution::objective)
      .def_readonly("l_max", &Solution::l_max)
      .def_readonly("n_iter", &Solution::n_iter)
      .def_readonly("wall_time", &Solution::wall_time)
      .def_readonly("converged", &Solution::converged)
      .def_readonly("kkt_residual", &Solution::kkt_residual)
      .def_readonly("tol", &Solution::tol)
      .def("to_json", [](const Solution& s) { return to_json(s).dump(); });

  m.def("solve", &solve_by_name, py::arg("solver"), py::arg("instance"),
        py::arg("params") = SolverParams{}, py::call_guard<py::gil_scoped_release>());
  m.def("solve_admm", &solve_admm, py::arg("instance"), py::arg("params") = SolverParams{});
  m.def("solve_cp", &solve_cp, py::arg("instance"), py::arg("params") = SolverParams{});
  m.def("solve_gradproj", &solve_gradproj, py::arg("instance"),
        py::arg("params") = SolverParams{});
  m.def("oracle_solve", &oracle_solve, py::arg("instance"), py::arg("tol") = 1e-7,
        py::arg("max_iter") = 10000);
  m.def("aggregate_oracle_solve", &aggregate_oracle_solve, py::arg("instance"),
        py::arg("tol") = 1e-7);

  py::class_<KktReport>(m, "KktReport")
      .def_readonly("primal_infeasibility", &KktReport::primal_infeasibility)
      .def_readonly("dual_infeasibility", &KktReport::dual_infeasibility)
      .def_readonly("complementary_slackness", &KktReport::complementary_slackness)
      .def_readonly("stationarity", &KktReport::stationarity)
      .def_readonly("consistency", &KktReport::consistency)
      .def_readonly("passed", &KktReport::passed)
      .def("max_residual", &KktReport::max_residual)
      .def("summary", &KktReport::summary);
  m.def("kkt_check",
        [](const Instance& inst, const Solution& s, double tol) {
          return kkt_check_single_path(inst, s.x, s.u, s.rho, tol);
        },
        py::arg("instance"), py::arg("solution"), py::arg("tol") = 1e-5);

  py::class_<MultipathAllocation>(m, "MultipathAllocation")
      .def_readonly("x", &MultipathAllocation::x)
      .def_readonly("u", &MultipathAllocation::u)
      .def_readonly("lambda_", &MultipathAllocation::lambda)
      .def_readonly("mu", &MultipathAllocation::mu)
      .def_readonly("objective", &MultipathAllocation::objective)
      .def_readonly("l_max", &MultipathAllocation::l_max)
      .def_readonly("converged", &MultipathAllocation::converged);
  m.def("solve_multipath", &solve_multipath, py::arg("instance"),
        py::arg("params") = SolverParams{});
  m.def("kkt_check_multipath", &kkt_check_multipath, py::arg("instance"), py::arg("allocation"),
        py::arg("tol") = 1e-5);
  m.def("allocate_subflows",
        [](const std::vector<double>& x_star, const std::vector<double>& g_bar, double tol,
           bool lp_fallback) { return allocate_subflows(x_star, g_bar, tol, lp_fallback); },
        py::arg("x_star"), py::arg("g_bar"),
        py::arg("tol") = 1e-9, py::arg("lp_fallback") = false);

  m.def("admm_u_update",
        [](double psi, double r, const std::vector<double>& w) { return admm_u_update(psi, r, w); },
        py::arg("psi"), py::arg("r"), py::arg("w"));
  m.def("cp_prox_f",
        [](const std::vector<double>& z, double tau, const std::vector<double>& w) {
          return cp_prox_f(z, tau, w);
        },
        py::arg("z"), py::arg("tau"), py::arg("w"));
  m.def("cp_prox_gstar",
        [](const std::vector<double>& z, double sigma, const std::vector<double>& c) {
          return cp_prox_gstar(z, sigma, c);
        },
        py::arg("z"), py::arg("sigma"), py::arg("c"));
  m.def("project_polytope",
        [](const std::vector<double>& x, int rows, std::vector<std::vector<int>> columns,
           const std::vector<double>& c) {
          return project_polytope(x, RoutingMatrix(rows, std::move(columns)), c).x;
        },
        py::arg("x"), py::arg("rows"), py::arg("columns"), py::arg("c"));

  py::class_<PwlConcave>(m, "PwlConcave")
      .def(py::init<std::vector<double>, std::vector<double>, double>(), py::arg("breakpoints"),
           py::arg("slopes"), py::arg("offset") = 0.0)
      .def_property_readonly("breakpoints", &PwlConcave::breakpoints)
      .def_property_readonly("slopes", &PwlConcave::slopes)
      .def_property_readonly("offset", &PwlConcave::offset)
      .def("__call__", [](const PwlConcave& f, double x) { return pwl_eval(f, x); })
      .def("__eq__", [](const PwlConcave& a, const PwlConcave& b) { return a == b; });
  m.def("pwl_conjugate", &pwl_conjugate, py::arg("f"));
  m.def("pwl_sum", [](const std::vector<PwlConcave>& fs) { return pwl_sum(fs); }, py::arg("fs"));
  m.def("pwl_supconv", [](const std::vector<PwlConcave>& fs) { return pwl_supconv(fs); },
        py::arg("fs"));
  m.def("pwl_apportion",
        [](const std::vector<PwlConcave>& fs, double x) { return pwl_apportion(fs, x); },
        py::arg("fs"), py::arg("x"));

  m.def("run_experiment",
        [](const std::string& config_json) {
          return to_json(run_experiment(config_from_json(Json::parse(config_json)))).dump();
        },
        py::arg("config_json"), py::call_guard<py::gil_scoped_release>());
  m.def("small_graph_config",
        [](std::uint64_t seed) { return to_json(small_graph_config(seed)).dump(); },
        py::arg("seed") = 1);
  m.def("format_report",
        [](const std::string& report_json, const std::string& format) {
          return format_report(report_from_json(Json::parse(report_json)),
                               parse_report_format(format));
        },
        py::arg("report_json"), py::arg("format") = "csv");
}
