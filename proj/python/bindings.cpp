#include "sgfem/analysis.hpp"
#include "sgfem/config.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sgfem;

namespace {

py::dict row_to_dict(const ConvergenceRow& r) {
  py::dict d;
  d["example"] = r.example;
  d["beta_minus"] = r.beta_minus;
  d["beta_plus"] = r.beta_plus;
  d["N"] = r.N;
  d["M"] = r.M;
  d["err_state"] = r.err_state;
  d["err_control"] = r.err_control;
  d["err_adjoint"] = r.err_adjoint;
  d["order_state"] = r.order_state;
  d["order_control"] = r.order_control;
  d["order_adjoint"] = r.order_adjoint;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  d["seconds"] = r.seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(sgfem, m) {
  m.doc() = "Stable generalized FEM for parabolic interface optimal control";

  auto base = py::register_exception<Error>(m, "SgfemError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<NonPositiveError>(m, "NonPositiveError", base.ptr());
  py::register_exception<IncompatibleMeshes>(m, "IncompatibleMeshes", base.ptr());
  py::register_exception<InfeasibleBounds>(m, "InfeasibleBounds", base.ptr());
  py::register_exception<SolverFailure>(m, "SolverFailure", base.ptr());

  py::class_<LevelSetInterface>(m, "Interface")
      .def_static("circle", [](double r) { return LevelSetInterface::circle(r); }, py::arg("radius") = 0.5)
      .def_static("cubic", &LevelSetInterface::cubic)
      .def_static("flower", &LevelSetInterface::flower)
      .def("phi", [](const LevelSetInterface& s, double x, double y) { return s.phi(Point(x, y)); })
      .def("one_sided_distance",
           [](const LevelSetInterface& s, double x, double y) { return one_sided_distance(s, Point(x, y)); })
      .def("is_minus",
           [](const LevelSetInterface& s, double x, double y) { return point_side(s, Point(x, y)) == Side::Minus; });

  py::class_<SgfemSpace, std::shared_ptr<SgfemSpace>>(m, "Space")
      .def_property_readonly("num_dofs", &SgfemSpace::num_dofs)
      .def_property_readonly("num_standard_dofs", &SgfemSpace::num_standard_dofs)
      .def_property_readonly("num_enrichment_dofs", &SgfemSpace::num_enrichment_dofs)
      .def_property_readonly("num_cut_elements",
                             [](const SgfemSpace& s) { return static_cast<int>(s.cut_elements().size()); });

  m.def(
      "build_space",
      [](int n, const LevelSetInterface& iface) {
        return std::const_pointer_cast<SgfemSpace>(build_space(std::make_shared<const TriMesh>(n), iface));
      },
      py::arg("n"), py::arg("interface"), "SGFEM space on the uniform N x N mesh of (-1, 1)^2.");

  m.def(
      "time_steps", [](int n, const std::string& rule) { return make_time_grid(n, parse_dt_rule(rule)).M; },
      py::arg("n"), py::arg("dt_rule") = "h2");

  m.def("eoc", &eoc, py::arg("errors"), py::arg("h"));
  m.def("csv_header", &csv_header);

  m.def(
      "run_convergence",
      [](const std::string& example, std::pair<double, double> beta, std::vector<int> n, const std::string& dt_rule,
         double alpha, double tol, int max_iter, double damping, int ref_n, std::optional<int> ref_m) {
        RunConfig c;
        c.example = example;
        std::tie(c.beta_minus, c.beta_plus) = beta;
        c.n_list = std::move(n);
        c.dt_rule = parse_dt_rule(dt_rule);
        c.alpha = alpha;
        c.tol = tol;
        c.max_iter = max_iter;
        c.damping = damping;
        c.ref_n = ref_n;
        c.ref_m = ref_m;
        std::vector<ConvergenceRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_convergence(c);
        }
        py::list out;
        for (const auto& r : rows) out.append(row_to_dict(r));
        return out;
      },
      py::arg("example") = "ex1", py::arg("beta") = std::pair{1.0, 10.0}, py::arg("n") = std::vector<int>{8, 16},
      py::arg("dt_rule") = "h2", py::arg("alpha") = 1.0, py::arg("tol") = 1e-10, py::arg("max_iter") = 200,
      py::arg("damping") = 1.0, py::arg("ref_n") = 128, py::arg("ref_m") = py::none(),
      "Convergence table rows as dictionaries.");
}
