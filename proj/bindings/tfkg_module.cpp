#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "tfkg/coeffs.hpp"
#include "tfkg/l1_scheme.hpp"
#include "tfkg/scheme.hpp"
#include "tfkg/study.hpp"
#include "tfkg/version.hpp"

namespace py = pybind11;

namespace {

int steps_from(double interval, double step) {
  const double ratio = interval / step;
  const int n = static_cast<int>(std::lround(ratio));
  if (n < 1 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("step size must divide the interval evenly");
  }
  return n;
}

tfkg::SchemeVariant variant_from(const std::string& name) {
  if (name == "std") return tfkg::SchemeVariant::StandardSecondOrder;
  if (name == "compact") return tfkg::SchemeVariant::CompactFourthOrder;
  throw std::invalid_argument("variant must be 'std' or 'compact'");
}

tfkg::ProblemSpec problem_from(int case_id, double alpha, const std::string& case3_f) {
  if (case_id == 3 && case3_f == "halfq") {
    return tfkg::manufactured_case3_half_quadratic(alpha);
  }
  if (case3_f != "sqrt" && case3_f != "halfq") {
    throw std::invalid_argument("case3_f must be 'sqrt' or 'halfq'");
  }
  return tfkg::manufactured_case(case_id, alpha);
}

struct PySolveResult {
  double e2 = 0.0;
  double max_residual = 0.0;
  double wall_seconds = 0.0;
  std::vector<double> nodes;
  std::vector<double> final_values;
};

PySolveResult solve_case(int case_id, double alpha, double tau, double h,
                         const std::string& variant, const std::string& case3_f) {
  const tfkg::ProblemSpec problem = problem_from(case_id, alpha, case3_f);
  tfkg::SchemeConfig cfg{
      tfkg::FractionalParams{alpha, tau, steps_from(problem.final_time, tau)},
      tfkg::SpaceGrid(problem.left, problem.right,
                      steps_from(problem.right - problem.left, h)),
      problem, variant_from(variant)};
  const tfkg::RunResult r = tfkg::run(cfg);

  PySolveResult out;
  out.e2 = r.e2.value_or(0.0);
  out.max_residual = r.max_residual;
  out.wall_seconds = r.integration_seconds;
  for (int i = 0; i <= cfg.grid.intervals(); ++i) out.nodes.push_back(cfg.grid.node(i));
  out.final_values = r.history.back().values();
  return out;
}

PySolveResult l1_solve_case(int case_id, double alpha, double tau, double h,
                            const std::string& mode, const std::string& case3_f) {
  const tfkg::ProblemSpec problem = problem_from(case_id, alpha, case3_f);
  tfkg::L1Config cfg{
      tfkg::FractionalParams{alpha, tau, steps_from(problem.final_time, tau)},
      tfkg::SpaceGrid(problem.left, problem.right,
                      steps_from(problem.right - problem.left, h)),
      problem,
      mode == "lagged" ? tfkg::L1Nonlinearity::Lagged
                       : tfkg::L1Nonlinearity::CentralIterative};
  const tfkg::L1RunResult r = tfkg::l1_run(cfg);

  PySolveResult out;
  out.e2 = r.e2.value_or(0.0);
  out.max_residual = r.max_residual;
  out.wall_seconds = r.integration_seconds;
  for (int i = 0; i <= cfg.grid.intervals(); ++i) out.nodes.push_back(cfg.grid.node(i));
  out.final_values = r.history.back().values();
  return out;
}

py::list rows_to_list(const tfkg::ConvergenceReport& report) {
  py::list rows;
  for (const auto& row : report.rows) {
    py::dict d;
    d["tau"] = row.tau;
    d["h"] = row.h;
    d["e2"] = row.e2;
    d["rate"] = row.rate ? py::object(py::float_(*row.rate)) : py::none();
    d["wall_seconds"] = row.wall_seconds;
    rows.append(d);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(tfkg, m) {
  m.doc() = "Linearized second-order solver for nonlinear time-fractional "
            "Klein-Gordon type equations (Caputo order 1 < alpha < 2)";
  m.attr("__version__") = tfkg::kVersion;

  m.def("gamma", &tfkg::gamma_fn, py::arg("x"), "Gamma function, x > 0");

  py::class_<tfkg::CoefficientTable>(m, "CoefficientTable",
      "Fractional discretization weights for given (alpha, tau, steps)")
      .def(py::init([](double alpha, double tau, int steps) {
             return tfkg::CoefficientTable(tfkg::FractionalParams{alpha, tau, steps});
           }),
           py::arg("alpha"), py::arg("tau"), py::arg("steps"))
      .def_property_readonly("theta", &tfkg::CoefficientTable::theta)
      .def_property_readonly("mu", &tfkg::CoefficientTable::mu)
      .def("a", &tfkg::CoefficientTable::a, py::arg("l"))
      .def("b", &tfkg::CoefficientTable::b, py::arg("l"))
      .def("c", &tfkg::CoefficientTable::c, py::arg("k"), py::arg("n"))
      .def("d", &tfkg::CoefficientTable::d, py::arg("k"), py::arg("n"));

  m.def("l1_weights", &tfkg::l1_weights, py::arg("alpha"), py::arg("steps"));

  py::class_<PySolveResult>(m, "SolveResult")
      .def_readonly("e2", &PySolveResult::e2)
      .def_readonly("max_residual", &PySolveResult::max_residual)
      .def_readonly("wall_seconds", &PySolveResult::wall_seconds)
      .def_readonly("nodes", &PySolveResult::nodes)
      .def_readonly("final_values", &PySolveResult::final_values);

  m.def("solve", &solve_case, py::arg("case_id"), py::arg("alpha"), py::arg("tau"),
        py::arg("h"), py::arg("variant") = "std", py::arg("case3_f") = "sqrt",
        "Run the linearized scheme on a benchmark case; returns SolveResult");

  m.def("l1_solve", &l1_solve_case, py::arg("case_id"), py::arg("alpha"),
        py::arg("tau"), py::arg("h"), py::arg("mode") = "central",
        py::arg("case3_f") = "sqrt",
        "Run the L1 reference scheme ('central' or 'lagged' nonlinearity)");

  m.def(
      "time_study",
      [](int case_id, double alpha, const std::string& variant, double h,
         double tau_coarsest, int halvings, bool case3_half_quadratic) {
        tfkg::StudyPlan plan;
        plan.case_id = case_id;
        plan.alpha = alpha;
        plan.variant = variant_from(variant);
        plan.direction = tfkg::RefineDirection::Time;
        plan.fixed_step = h;
        plan.ladder = tfkg::halving_ladder(tau_coarsest, halvings);
        plan.case3_half_quadratic = case3_half_quadratic;
        return rows_to_list(tfkg::run_time_study(plan));
      },
      py::arg("case_id"), py::arg("alpha"), py::arg("variant"), py::arg("h"),
      py::arg("tau_coarsest"), py::arg("halvings"),
      py::arg("case3_half_quadratic") = false,
      "Temporal refinement study; returns a list of row dicts");

  m.def(
      "space_study",
      [](int case_id, double alpha, const std::string& variant, double tau,
         double h_coarsest, int halvings, bool case3_half_quadratic) {
        tfkg::StudyPlan plan;
        plan.case_id = case_id;
        plan.alpha = alpha;
        plan.variant = variant_from(variant);
        plan.direction = tfkg::RefineDirection::Space;
        plan.fixed_step = tau;
        plan.ladder = tfkg::halving_ladder(h_coarsest, halvings);
        plan.case3_half_quadratic = case3_half_quadratic;
        return rows_to_list(tfkg::run_space_study(plan));
      },
      py::arg("case_id"), py::arg("alpha"), py::arg("variant"), py::arg("tau"),
      py::arg("h_coarsest"), py::arg("halvings"),
      py::arg("case3_half_quadratic") = false,
      "Spatial refinement study; returns a list of row dicts");

  m.def(
      "compare_l1",
      [](int case_id, double alpha, double h, double tau_coarsest, int halvings,
         bool case3_half_quadratic) {
        const tfkg::ComparisonReport cmp = tfkg::run_comparison(
            case_id, alpha, h, tfkg::halving_ladder(tau_coarsest, halvings),
            case3_half_quadratic);
        return py::make_tuple(rows_to_list(cmp.linearized), rows_to_list(cmp.l1));
      },
      py::arg("case_id"), py::arg("alpha"), py::arg("h"), py::arg("tau_coarsest"),
      py::arg("halvings"), py::arg("case3_half_quadratic") = false,
      "Linearized vs iterative-L1 comparison; returns (linearized_rows, l1_rows)");
}
