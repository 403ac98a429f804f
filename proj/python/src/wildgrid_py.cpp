#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wildgrid/ccga.hpp"
#include "wildgrid/errors.hpp"
#include "wildgrid/ingest.hpp"
#include "wildgrid/milp/branch_and_bound.hpp"
#include "wildgrid/milp/highs_backend.hpp"
#include "wildgrid/oracle.hpp"
#include "wildgrid/subproblem.hpp"

namespace py = pybind11;
using namespace wildgrid;

namespace {

template <class T>
py::list nested(const Grid2<T>& g) {
  py::list out;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < g.cols(); ++j) row.append(g(i, j));
    out.append(row);
  }
  return out;
}

template <class G>
py::list nested3(const G& g) {
  py::list out;
  for (std::size_t i = 0; i < g.dim0(); ++i) {
    py::list a;
    for (std::size_t s = 0; s < g.dim1(); ++s) {
      py::list b;
      for (std::size_t y = 0; y < g.dim2(); ++y) b.append(g(i, s, y));
      a.append(b);
    }
    out.append(a);
  }
  return out;
}

py::list flags(const FlagGrid& g) {
  py::list out;
  for (std::size_t i = 0; i < g.buses(); ++i) {
    py::list a;
    for (std::size_t s = 0; s < g.scenarios(); ++s) {
      py::list b;
      for (std::size_t y = 0; y < g.years(); ++y) b.append(static_cast<int>(g(i, s, y)));
      a.append(b);
    }
    out.append(a);
  }
  return out;
}

py::dict investment_dict(const InvestmentCost& inv) {
  py::dict d;
  d["lines"] = inv.lines;
  d["modification"] = inv.modification;
  d["solar"] = inv.solar;
  d["total"] = inv.total();
  return d;
}

CaseOverrides make_overrides(std::optional<int> years, std::optional<double> uncertainty, std::optional<int> budget,
                             std::optional<double> risk_tolerance, std::optional<double> shed_penalty,
                             std::optional<int> segments, std::optional<double> epsilon,
                             std::optional<int> max_iterations) {
  CaseOverrides ov;
  ov.years = years;
  ov.uncertainty = uncertainty;
  ov.budget = budget;
  ov.risk_tolerance = risk_tolerance;
  ov.shed_penalty = shed_penalty;
  ov.segments = segments;
  ov.epsilon = epsilon;
  ov.max_iterations = max_iterations;
  return ov;
}

ReportRealization parse_which(const std::string& which) {
  if (which == "worst") return ReportRealization::Worst;
  if (which == "nominal") return ReportRealization::Nominal;
  throw ConfigError("realization must be 'worst' or 'nominal', got '" + which + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Robust grid expansion planning under wildfire risk";

  auto config_error = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<RiskInfeasibleError>(m, "RiskInfeasibleError", PyExc_RuntimeError);
  py::register_exception<RecourseInfeasibleError>(m, "RecourseInfeasibleError", PyExc_RuntimeError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<OracleLimitError>(m, "OracleLimitError", PyExc_RuntimeError);
  (void)config_error;

  py::class_<PlanningConfig>(m, "PlanningConfig")
      .def_readonly("years", &PlanningConfig::years)
      .def_readwrite("risk_tolerance", &PlanningConfig::risk_tolerance)
      .def_readwrite("uncertainty_budget", &PlanningConfig::uncertainty_budget)
      .def_readwrite("shed_penalty", &PlanningConfig::shed_penalty)
      .def_readwrite("delta", &PlanningConfig::delta)
      .def_readwrite("epsilon", &PlanningConfig::epsilon)
      .def_readwrite("max_iterations", &PlanningConfig::max_iterations)
      .def_readonly("segments", &PlanningConfig::segments)
      .def_readonly("base_mva", &PlanningConfig::base_mva)
      .def_property_readonly("epsilon_mode", [](const PlanningConfig& c) {
        return c.epsilon_mode == EpsilonMode::Relative ? "relative" : "absolute";
      });

  py::class_<CaseData>(m, "Case")
      .def_readwrite("config", &CaseData::config)
      .def_property_readonly("num_buses", &CaseData::num_buses)
      .def_property_readonly("num_lines", &CaseData::num_lines)
      .def_property_readonly("num_generators", &CaseData::num_generators)
      .def_property_readonly("num_scenarios", &CaseData::num_scenarios)
      .def_property_readonly("num_years", &CaseData::num_years)
      .def_property_readonly("bus_ids",
                             [](const CaseData& c) {
                               std::vector<int> ids;
                               for (const Bus& b : c.buses) ids.push_back(b.id);
                               return ids;
                             })
      .def_property_readonly("line_ids",
                             [](const CaseData& c) {
                               std::vector<std::string> ids;
                               for (const Line& l : c.lines) ids.push_back(l.id);
                               return ids;
                             })
      .def_property_readonly("scenario_labels",
                             [](const CaseData& c) {
                               std::vector<std::string> out;
                               for (const Scenario& s : c.scenarios) out.push_back(s.label);
                               return out;
                             })
      .def("validate", &validate_case, "List of invariant violations; empty when valid")
      .def("to_json", &case_to_json)
      .def("__eq__", [](const CaseData& a, const CaseData& b) { return a == b; })
      .def("__repr__", [](const CaseData& c) {
        return "<Case buses=" + std::to_string(c.num_buses()) + " lines=" + std::to_string(c.num_lines()) +
               " scenarios=" + std::to_string(c.num_scenarios()) + " years=" + std::to_string(c.num_years()) + ">";
      });

  py::class_<PlanDecision>(m, "Plan")
      .def_property_readonly("line_exists", [](const PlanDecision& p) { return nested(p.line_exists); })
      .def_property_readonly("line_modified", [](const PlanDecision& p) { return nested(p.line_modified); })
      .def_property_readonly("line_energized", [](const PlanDecision& p) { return nested3(p.line_energized); })
      .def_property_readonly("solar_capacity", [](const PlanDecision& p) { return nested(p.solar_capacity); })
      .def("__eq__", [](const PlanDecision& a, const PlanDecision& b) { return a == b; });

  py::class_<UncertaintyRealization>(m, "Realization")
      .def_property_readonly("u_demand", [](const UncertaintyRealization& r) { return flags(r.u_demand); })
      .def_property_readonly("v_demand", [](const UncertaintyRealization& r) { return flags(r.v_demand); })
      .def_property_readonly("u_solar", [](const UncertaintyRealization& r) { return flags(r.u_solar); })
      .def_property_readonly("v_solar", [](const UncertaintyRealization& r) { return flags(r.v_solar); })
      .def_property_readonly("budget_used", &UncertaintyRealization::budget_used)
      .def("is_nominal", &UncertaintyRealization::is_nominal)
      .def("key", &UncertaintyRealization::key)
      .def("__eq__", [](const UncertaintyRealization& a, const UncertaintyRealization& b) { return a == b; });

  py::class_<IterationRecord>(m, "Iteration")
      .def_readonly("iteration", &IterationRecord::iteration)
      .def_readonly("lb", &IterationRecord::lb)
      .def_readonly("ub", &IterationRecord::ub)
      .def_readonly("master_objective", &IterationRecord::master_objective)
      .def_readonly("investment", &IterationRecord::investment)
      .def_readonly("worst_operating", &IterationRecord::worst_operating)
      .def_readonly("realization", &IterationRecord::realization)
      .def_readonly("master_ms", &IterationRecord::master_ms)
      .def_readonly("subproblem_ms", &IterationRecord::subproblem_ms);

  py::class_<RobustPlanResult>(m, "Result")
      .def_readonly("plan", &RobustPlanResult::plan)
      .def_readonly("lb", &RobustPlanResult::lb)
      .def_readonly("ub", &RobustPlanResult::ub)
      .def_readonly("epsilon", &RobustPlanResult::epsilon)
      .def_readonly("converged", &RobustPlanResult::converged)
      .def_readonly("duplicate_vertex", &RobustPlanResult::duplicate_vertex)
      .def_readonly("iterations", &RobustPlanResult::iterations)
      .def_readonly("realizations", &RobustPlanResult::realizations)
      .def_readonly("worst_realization", &RobustPlanResult::worst_realization)
      .def_readonly("worst_operating", &RobustPlanResult::worst_operating)
      .def_property_readonly("investment", [](const RobustPlanResult& r) { return investment_dict(r.investment); })
      .def_property_readonly("total", [](const RobustPlanResult& r) { return r.investment.total() + r.worst_operating; });

  py::class_<SubproblemResult>(m, "WorstCaseResult")
      .def_readonly("cost", &SubproblemResult::worst_cost)
      .def_readonly("bound", &SubproblemResult::bound)
      .def_readonly("realization", &SubproblemResult::realization)
      .def_readonly("nodes", &SubproblemResult::nodes);

  py::class_<WorstCase>(m, "BruteForceResult")
      .def_readonly("cost", &WorstCase::cost)
      .def_readonly("realization", &WorstCase::realization)
      .def_readonly("vertices", &WorstCase::vertices)
      .def_readonly("lp_solves", &WorstCase::lp_solves);

  m.def(
      "load_case",
      [](const std::string& path, std::optional<int> years, std::optional<double> uncertainty,
         std::optional<int> budget, std::optional<double> risk_tolerance, std::optional<double> shed_penalty,
         std::optional<int> segments, std::optional<double> epsilon, std::optional<int> max_iterations) {
        return load_case(path, make_overrides(years, uncertainty, budget, risk_tolerance, shed_penalty, segments,
                                              epsilon, max_iterations))
            .data;
      },
      py::arg("path"), py::kw_only(), py::arg("years") = py::none(), py::arg("uncertainty") = py::none(),
      py::arg("budget") = py::none(), py::arg("risk_tolerance") = py::none(), py::arg("shed_penalty") = py::none(),
      py::arg("segments") = py::none(), py::arg("epsilon") = py::none(), py::arg("max_iterations") = py::none(),
      "Load and validate a JSON case file, applying optional overrides.");
  m.def(
      "parse_case", [](const std::string& text) { return parse_case(text).data; }, py::arg("text"));
  m.def(
      "case_provenance", [](const std::string& path) { return load_case(path).provenance; }, py::arg("path"),
      "Fields of the case file that were filled with defaults.");
  m.def("write_case", &write_case, py::arg("case"), py::arg("path"));
  m.def("restrict_to_scenario", &restrict_to_scenario, py::arg("case"), py::arg("label"));

  m.def(
      "solve",
      [](const CaseData& c, const std::string& solver, std::uint64_t seed, double time_limit, bool record_timings,
         std::function<void(const IterationRecord&)> on_iteration) {
        CcgaOptions o;
        o.solver = solver;
        o.seed = seed;
        o.time_limit_s = time_limit;
        o.record_timings = record_timings;
        o.on_iteration = std::move(on_iteration);
        return solve(c, o);
      },
      py::arg("case"), py::kw_only(), py::arg("solver") = "auto", py::arg("seed") = 0, py::arg("time_limit") = 0.0,
      py::arg("record_timings") = true, py::arg("on_iteration") = nullptr,
      "Robust plan by column-and-constraint generation.");
  m.def(
      "worst_case",
      [](const CaseData& c, const PlanDecision& plan, const std::string& solver) {
        return solve_subproblem(c, plan, *milp::make_backend(solver));
      },
      py::arg("case"), py::arg("plan"), py::kw_only(), py::arg("solver") = "auto",
      "Worst-case operating cost of a fixed plan (dual MILP).");
  m.def(
      "brute_force",
      [](const CaseData& c, const PlanDecision& plan, bool prune, std::size_t max_vertices) {
        return worst_case_brute_force(c, plan, OracleOptions{prune, max_vertices});
      },
      py::arg("case"), py::arg("plan"), py::kw_only(), py::arg("prune") = true, py::arg("max_vertices") = 1000000,
      "Worst case by enumerating every vertex of the uncertainty set.");
  m.def("count_realizations", &count_realizations, py::arg("case"), py::arg("budget"), py::arg("prune") = true);
  m.def("nominal_realization", &UncertaintyRealization::nominal, py::arg("case"));
  m.def("operating_cost", &primal_recourse_value, py::arg("case"), py::arg("plan"), py::arg("realization"),
        "Operating cost of a fixed plan under one realization.");
  m.def(
      "investment_cost", [](const CaseData& c, const PlanDecision& p) { return investment_dict(investment_cost(c, p)); },
      py::arg("case"), py::arg("plan"));
  m.def("check_plan", [](const CaseData& c, const PlanDecision& p) { return check_plan(c, p); }, py::arg("case"),
        py::arg("plan"));
  m.def("score_threshold", &score_threshold, py::arg("case"), py::arg("line"), py::arg("scenario"), py::arg("year"),
        py::arg("modified"));
  m.def(
      "write_result",
      [](const CaseData& c, const RobustPlanResult& r, const std::string& dir, const std::string& which) {
        return write_result(c, r, dir, parse_which(which));
      },
      py::arg("case"), py::arg("result"), py::arg("directory"), py::arg("realization") = "worst",
      "Write the five CSV reports; returns the paths.");
  m.def("highs_available", &milp::HighsBackend::available);
}
