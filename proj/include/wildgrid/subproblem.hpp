#pragma once

#include <vector>

#include "wildgrid/milp/dualize.hpp"
#include "wildgrid/milp/problem.hpp"
#include "wildgrid/model.hpp"
#include "wildgrid/recourse.hpp"

namespace wildgrid {

/// Throws ConfigError when the plan breaks a structural invariant and
/// RiskInfeasibleError when its energized lines exceed the risk tolerance.
void require_valid_plan(const CaseData& c, const PlanDecision& plan);

/// Operating LP of a fixed plan under one realization, in dollars.
struct RecourseLp {
  milp::MilpProblem problem;
  std::vector<PeriodBlock> blocks;  // s-major over (s, y)
  std::vector<ScoreBlock> scores;
};
RecourseLp build_recourse_lp(const CaseData& c, const PlanDecision& plan, const UncertaintyRealization& r);

/// Operating cost of one scenario-year for given per-bus demand and
/// availability. Throws RecourseInfeasibleError when no dispatch exists.
double period_recourse_value(const CaseData& c, const PlanDecision& plan, std::size_t s, std::size_t y,
                             const std::vector<double>& demand, const std::vector<double>& availability);

/// Sum over scenario-years of the operating cost under realization r.
double primal_recourse_value(const CaseData& c, const PlanDecision& plan, const UncertaintyRealization& r);

struct RecourseDispatch {
  double cost = 0.0;
  std::vector<double> period_cost;  // s-major over (s, y)
  DispatchSolution dispatch;
};
RecourseDispatch solve_recourse(const CaseData& c, const PlanDecision& plan, const UncertaintyRealization& r);

struct SubproblemOptions {
  /// Cap on the duals of demand and solar bounds, in units of K*R_s.
  double dual_cap = 10.0;
  /// Times the cap may be raised by 10x when a capped dual ends at its cap.
  int cap_retries = 3;
  /// Clear flags that do not change the worst-case value (key order).
  bool canonicalize = true;
};

struct SubproblemModel {
  milp::MilpProblem problem;  // maximization, scaled by `scale`
  FlagGrid has_u_demand, has_v_demand, has_u_solar, has_v_solar;
  Grid3<milp::VarRef> u_demand, v_demand, u_solar, v_solar;  // [i][s][y]
  milp::DualBlock dual;
  std::vector<milp::VarRef> capped;  // duals limited by dual_cap
  double dual_cap = 0.0;
  double scale = 1.0;
};

SubproblemModel build_subproblem(const CaseData& c, const PlanDecision& plan, const SubproblemOptions& options = {});

struct SubproblemResult {
  double worst_cost = 0.0;  // dollars, incumbent of the worst-case problem
  double bound = 0.0;       // dollars, proven upper bound on the worst case
  UncertaintyRealization realization;
  double dual_cap = 0.0;    // cap used by the final solve
  long nodes = 0;
};

/// Worst-case operating cost of a fixed plan over the budgeted vertex set.
/// Throws ConfigError for a malformed plan and RecourseInfeasibleError when
/// the plan has no feasible dispatch for some vertex.
SubproblemResult solve_subproblem(const CaseData& c, const PlanDecision& plan, const milp::SolverBackend& backend,
                                  const milp::SolveOptions& solve_options = {},
                                  const SubproblemOptions& options = {});

/// Worst-case problem with every flag fixed to r: a pure LP whose value is
/// the dual of the operating LP at r.
double fixed_flag_dual_value(const CaseData& c, const PlanDecision& plan, const UncertaintyRealization& r,
                             const milp::SolverBackend& backend, const SubproblemOptions& options = {});

}  // namespace wildgrid
