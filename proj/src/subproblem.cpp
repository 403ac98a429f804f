#include "wildgrid/subproblem.hpp"

#include <algorithm>
#include <cmath>

#include "wildgrid/errors.hpp"
#include "wildgrid/milp/simplex.hpp"

namespace wildgrid {

using milp::LinExpr;
using milp::RowSense;
using milp::VarRef;

namespace {

constexpr double kFlagTol = 1e-9;

// An energized line's score floor counts against the tolerance whatever the
// dispatch, so a plan over the cap has no operating point at all.
void require_risk_feasible(const CaseData& c, const PlanDecision& plan) {
  for (std::size_t s = 0; s < c.num_scenarios(); ++s)
    for (std::size_t y = 0; y < c.num_years(); ++y) {
      double total = 0.0;
      for (std::size_t l = 0; l < c.num_lines(); ++l)
        if (plan.line_energized(l, s, y)) total += score_threshold(c, l, s, y, plan.aux(l, s, y) > 0.5);
      if (total > c.config.risk_tolerance + 1e-9)
        throw RiskInfeasibleError("plan exceeds the risk tolerance in scenario " + std::to_string(s) + ", year " +
                                  std::to_string(y + 1) + " (score " + std::to_string(total) + " > " +
                                  std::to_string(c.config.risk_tolerance) + ")");
    }
}

}  // namespace

void require_valid_plan(const CaseData& c, const PlanDecision& plan) {
  const auto errs = check_plan(c, plan);
  if (errs.empty()) return require_risk_feasible(c, plan);
  std::string msg = "plan violates its invariants:";
  for (const auto& e : errs) msg += " " + e + ";";
  throw ConfigError(msg);
}

namespace {

std::string period_name(std::size_t s, std::size_t y) {
  return "scenario " + std::to_string(s) + ", year " + std::to_string(y + 1);
}

// Solves the operating LP of one scenario-year; fills `out` when given.
double solve_period(const CaseData& c, const PlanExprs& plan, std::size_t s, std::size_t y,
                    const std::vector<double>& demand, const std::vector<double>& availability,
                    DispatchSolution* out) {
  milp::MilpProblem p;
  const ScoreBlock score = add_score_block(p, c, plan, s, y, "");
  const PeriodBlock block = add_period_block(p, c, plan, s, y, demand, availability, "");
  p.set_objective(milp::ObjSense::Minimize, block.cost);
  milp::DenseSimplex lp(p);
  const milp::LpStatus st = lp.solve();
  if (st == milp::LpStatus::Infeasible)
    throw RecourseInfeasibleError("no feasible dispatch in " + period_name(s, y) +
                                  " (risk tolerance or generator minimums cannot be met)");
  if (st != milp::LpStatus::Optimal) throw SolverError("operating LP did not solve in " + period_name(s, y));
  if (out) {
    const std::vector<double> x = lp.primal();
    extract_period(c, block, x, *out);
    for (std::size_t l = 0; l < c.num_lines(); ++l) out->score(l, s, y) = x[static_cast<std::size_t>(score.score[l].id)];
  }
  return lp.objective();
}

}  // namespace

RecourseLp build_recourse_lp(const CaseData& c, const PlanDecision& plan, const UncertaintyRealization& r) {
  const PlanExprs exprs = PlanExprs::constant(c, plan);
  const RealizedData data = apply_realization(c, r);
  RecourseLp lp;
  LinExpr cost;
  for (std::size_t s = 0; s < c.num_scenarios(); ++s)
    for (std::size_t y = 0; y < c.num_years(); ++y) {
      lp.scores.push_back(add_score_block(lp.problem, c, exprs, s, y, ""));
      lp.blocks.push_back(add_period_block(lp.problem, c, exprs, s, y, period_demand(data, s, y),
                                           period_availability(data, s, y), ""));
      cost.add(lp.blocks.back().cost, 1.0);
    }
  lp.problem.set_objective(milp::ObjSense::Minimize, cost);
  return lp;
}

double period_recourse_value(const CaseData& c, const PlanDecision& plan, std::size_t s, std::size_t y,
                             const std::vector<double>& demand, const std::vector<double>& availability) {
  return solve_period(c, PlanExprs::constant(c, plan), s, y, demand, availability, nullptr);
}

RecourseDispatch solve_recourse(const CaseData& c, const PlanDecision& plan, const UncertaintyRealization& r) {
  require_valid_plan(c, plan);
  const PlanExprs exprs = PlanExprs::constant(c, plan);
  const RealizedData data = apply_realization(c, r);
  RecourseDispatch out;
  out.dispatch = empty_dispatch(c);
  for (std::size_t s = 0; s < c.num_scenarios(); ++s)
    for (std::size_t y = 0; y < c.num_years(); ++y) {
      const double v = solve_period(c, exprs, s, y, period_demand(data, s, y), period_availability(data, s, y),
                                    &out.dispatch);
      out.period_cost.push_back(v);
      out.cost += v;
    }
  return out;
}

double primal_recourse_value(const CaseData& c, const PlanDecision& plan, const UncertaintyRealization& r) {
  require_valid_plan(c, plan);
  const PlanExprs exprs = PlanExprs::constant(c, plan);
  const RealizedData data = apply_realization(c, r);
  double total = 0.0;
  for (std::size_t s = 0; s < c.num_scenarios(); ++s)
    for (std::size_t y = 0; y < c.num_years(); ++y)
      total += solve_period(c, exprs, s, y, period_demand(data, s, y), period_availability(data, s, y), nullptr);
  return total;
}

SubproblemModel build_subproblem(const CaseData& c, const PlanDecision& plan, const SubproblemOptions& options) {
  require_valid_plan(c, plan);
  const auto I = c.num_buses(), S = c.num_scenarios(), Y = c.num_years();
  const RecourseLp primal = build_recourse_lp(c, plan, UncertaintyRealization::nominal(c));

  SubproblemModel m;
  m.scale = cost_scale(c);
  m.dual_cap = options.dual_cap;
  m.has_u_demand = m.has_v_demand = m.has_u_solar = m.has_v_solar = FlagGrid(I, S, Y);
  m.u_demand = m.v_demand = m.u_solar = m.v_solar = Grid3<VarRef>(I, S, Y);
  auto& p = m.problem;

  milp::DualizeOptions dopt;
  dopt.objective_scale = m.scale;
  dopt.shifted_dual_cap = options.dual_cap;
  LinExpr flag_terms;
  LinExpr budget;
  const double K = c.config.shed_penalty;

  for (const PeriodBlock& b : primal.blocks) {
    const std::size_t s = b.s, y = b.y;
    const double weight = K * c.scenarios[s].hours / m.scale;
    for (std::size_t i = 0; i < I; ++i) {
      const std::string at = "[" + std::to_string(c.buses[i].id) + ",s" + std::to_string(s) + ",y" +
                             std::to_string(y) + "]";
      const EffectiveDeviation dd = demand_deviation(c, i, s, y);
      VarRef ud, vd, ur, vr;
      if (dd.up > kFlagTol) {
        ud = p.add_binary("u_demand" + at);
        dopt.shifts.push_back({b.served[i].id, ud, dd.up});
        flag_terms.add(ud, weight * dd.up);
        budget.add(ud, 1.0);
        m.has_u_demand(i, s, y) = 1;
        m.u_demand(i, s, y) = ud;
      }
      if (dd.down > kFlagTol) {
        vd = p.add_binary("v_demand" + at);
        dopt.shifts.push_back({b.served[i].id, vd, -dd.down});
        flag_terms.add(vd, -weight * dd.down);
        m.has_v_demand(i, s, y) = 1;
        m.v_demand(i, s, y) = vd;
      }
      if (b.solar[i].valid()) {
        const double cap = plan.solar_capacity(i, y);
        const EffectiveDeviation sd = solar_deviation(c, i, s, y);
        if (cap * sd.up > kFlagTol) {
          ur = p.add_binary("u_solar" + at);
          dopt.shifts.push_back({b.solar[i].id, ur, cap * sd.up});
          budget.add(ur, 1.0);
          m.has_u_solar(i, s, y) = 1;
          m.u_solar(i, s, y) = ur;
        }
        if (cap * sd.down > kFlagTol) {
          vr = p.add_binary("v_solar" + at);
          dopt.shifts.push_back({b.solar[i].id, vr, -cap * sd.down});
          m.has_v_solar(i, s, y) = 1;
          m.v_solar(i, s, y) = vr;
        }
      }
      if (ud.valid() && vd.valid())
        p.add_constraint(LinExpr(ud).add(vd, 1.0), RowSense::LessEqual, 1.0, "onedir_demand" + at);
      if (ur.valid() && vr.valid())
        p.add_constraint(LinExpr(ur).add(vr, 1.0), RowSense::LessEqual, 1.0, "onedir_solar" + at);
    }
  }
  if (!budget.terms().empty())
    p.add_constraint(budget, RowSense::LessEqual, std::max(0, c.config.uncertainty_budget), "budget");

  m.dual = milp::append_dual(p, primal.problem, dopt);
  for (const milp::BoundShift& sh : dopt.shifts) m.capped.push_back(m.dual.vars[static_cast<std::size_t>(sh.var)].neg);
  std::sort(m.capped.begin(), m.capped.end());
  m.capped.erase(std::unique(m.capped.begin(), m.capped.end()), m.capped.end());
  LinExpr objective = m.dual.objective;
  objective.add(flag_terms, 1.0);
  p.set_objective(milp::ObjSense::Maximize, objective);
  return m;
}

namespace {

bool cap_reached(const SubproblemModel& m, const std::vector<double>& x) {
  for (VarRef v : m.capped)
    if (x[static_cast<std::size_t>(v.id)] >= m.dual_cap * (1.0 - 1e-7)) return true;
  return false;
}

UncertaintyRealization read_flags(const CaseData& c, const SubproblemModel& m, const std::vector<double>& x) {
  UncertaintyRealization r = UncertaintyRealization::nominal(c);
  auto on = [&](VarRef v) -> std::uint8_t { return v.valid() && x[static_cast<std::size_t>(v.id)] > 0.5 ? 1 : 0; };
  for (std::size_t i = 0; i < c.num_buses(); ++i)
    for (std::size_t s = 0; s < c.num_scenarios(); ++s)
      for (std::size_t y = 0; y < c.num_years(); ++y) {
        r.u_demand(i, s, y) = on(m.u_demand(i, s, y));
        r.v_demand(i, s, y) = on(m.v_demand(i, s, y));
        r.u_solar(i, s, y) = on(m.u_solar(i, s, y));
        r.v_solar(i, s, y) = on(m.v_solar(i, s, y));
      }
  return r;
}

// Clears, in key order, every flag whose removal keeps the value.
UncertaintyRealization canonicalize(const CaseData& c, const PlanDecision& plan, UncertaintyRealization r,
                                    double tol) {
  const PlanExprs exprs = PlanExprs::constant(c, plan);
  auto value = [&](const UncertaintyRealization& q, std::size_t s, std::size_t y) {
    const RealizedData d = apply_realization(c, q);
    return solve_period(c, exprs, s, y, period_demand(d, s, y), period_availability(d, s, y), nullptr);
  };
  for (std::size_t i = 0; i < c.num_buses(); ++i)
    for (std::size_t s = 0; s < c.num_scenarios(); ++s)
      for (std::size_t y = 0; y < c.num_years(); ++y) {
        FlagGrid* channels[] = {&r.u_demand, &r.v_demand, &r.u_solar, &r.v_solar};
        for (FlagGrid* g : channels) {
          if (!(*g)(i, s, y)) continue;
          const double before = value(r, s, y);
          (*g)(i, s, y) = 0;
          if (value(r, s, y) < before - tol) (*g)(i, s, y) = 1;
        }
      }
  return r;
}

}  // namespace

SubproblemResult solve_subproblem(const CaseData& c, const PlanDecision& plan, const milp::SolverBackend& backend,
                                  const milp::SolveOptions& solve_options, const SubproblemOptions& options) {
  SubproblemOptions opt = options;
  for (int attempt = 0;; ++attempt) {
    const SubproblemModel m = build_subproblem(c, plan, opt);
    const milp::MilpSolution sol = backend.solve(m.problem, solve_options);
    if (sol.status == milp::SolveStatus::Unbounded)
      throw RecourseInfeasibleError(
          "plan not robustly feasible: some uncertainty vertex admits no dispatch (worst-case dual unbounded)");
    if (sol.status == milp::SolveStatus::Infeasible) throw SolverError("worst-case problem reported infeasible");
    if (!sol.has_solution()) throw SolverError("worst-case problem: solver stopped without a solution");
    if (attempt < opt.cap_retries && cap_reached(m, sol.values)) {
      opt.dual_cap *= 10.0;
      continue;
    }
    SubproblemResult out;
    out.worst_cost = sol.objective * m.scale;
    out.bound = std::max(sol.bound, sol.objective) * m.scale;
    out.dual_cap = m.dual_cap;
    out.nodes = sol.nodes;
    out.realization = read_flags(c, m, sol.values);
    if (opt.canonicalize)
      out.realization = canonicalize(c, plan, out.realization, 1e-9 * std::max(1.0, std::abs(out.worst_cost)));
    return out;
  }
}

double fixed_flag_dual_value(const CaseData& c, const PlanDecision& plan, const UncertaintyRealization& r,
                             const milp::SolverBackend& backend, const SubproblemOptions& options) {
  SubproblemOptions opt = options;
  for (int attempt = 0;; ++attempt) {
    SubproblemModel m = build_subproblem(c, plan, opt);
    auto fix = [&](VarRef v, std::uint8_t val) {
      if (v.valid()) m.problem.set_bounds(v, val, val);
    };
    for (std::size_t i = 0; i < c.num_buses(); ++i)
      for (std::size_t s = 0; s < c.num_scenarios(); ++s)
        for (std::size_t y = 0; y < c.num_years(); ++y) {
          fix(m.u_demand(i, s, y), r.u_demand(i, s, y));
          fix(m.v_demand(i, s, y), r.v_demand(i, s, y));
          fix(m.u_solar(i, s, y), r.u_solar(i, s, y));
          fix(m.v_solar(i, s, y), r.v_solar(i, s, y));
        }
    const milp::MilpSolution sol = backend.solve(m.problem, {});
    if (sol.status == milp::SolveStatus::Unbounded)
      throw RecourseInfeasibleError("operating LP infeasible at the given realization (dual unbounded)");
    if (!sol.has_solution()) throw SolverError("fixed-flag dual: no solution (status " +
                                               std::string(milp::to_string(sol.status)) + ")");
    if (attempt < opt.cap_retries && cap_reached(m, sol.values)) {
      opt.dual_cap *= 10.0;
      continue;
    }
    return sol.objective * m.scale;
  }
}

}  // namespace wildgrid
