#include "wildgrid/master.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "wildgrid/errors.hpp"
#include "wildgrid/milp/linearize.hpp"

namespace wildgrid {

using milp::LinExpr;
using milp::RowSense;
using milp::VarRef;

namespace {

std::string join_errors(const std::vector<std::string>& errs) {
  std::string out;
  for (const auto& e : errs) out += (out.empty() ? "" : "; ") + e;
  return out;
}

}  // namespace

MasterModel build_master(const CaseData& c, const std::vector<UncertaintyRealization>& realizations) {
  if (realizations.empty()) throw ConfigError("build_master: realization list is empty");
  if (!realizations.front().is_nominal()) throw ConfigError("build_master: realization 0 must be nominal");
  if (const auto errs = validate_case(c); !errs.empty())
    throw ConfigError("build_master: invalid case: " + join_errors(errs));

  const auto L = c.num_lines(), S = c.num_scenarios(), Y = c.num_years(), I = c.num_buses();
  MasterModel m;
  auto& p = m.problem;
  m.scale = cost_scale(c);
  m.exists = Grid2<VarRef>(L, Y);
  m.modified = Grid2<VarRef>(L, Y);
  m.energized = Grid3<VarRef>(L, S, Y);
  m.aux = Grid3<VarRef>(L, S, Y);
  m.solar = Grid2<VarRef>(I, Y);
  PlanExprs plan{Grid2<LinExpr>(L, Y), Grid3<LinExpr>(L, S, Y), Grid3<LinExpr>(L, S, Y), Grid2<LinExpr>(I, Y)};

  for (std::size_t l = 0; l < L; ++l) {
    const Line& line = c.lines[l];
    for (std::size_t y = 0; y < Y; ++y) {
      const std::string ys = "[y" + std::to_string(y) + "]";
      const VarRef ex = p.add_binary("exists:" + line.id + ys);
      const VarRef mod = p.add_binary("modified:" + line.id + ys);
      if (line.existing) p.set_bounds(ex, 1.0, 1.0);
      m.exists(l, y) = ex;
      m.modified(l, y) = mod;
      plan.exists(l, y) = LinExpr(ex);
      const LinExpr prev_ex = y == 0 ? LinExpr(line.existing ? 1.0 : 0.0) : LinExpr(m.exists(l, y - 1));
      const LinExpr prev_mod = y == 0 ? LinExpr(0.0) : LinExpr(m.modified(l, y - 1));
      if (y > 0) {
        p.add_constraint(LinExpr(ex).add(prev_ex, -1.0), RowSense::GreaterEqual, 0.0, "keep:" + line.id + ys);
        p.add_constraint(LinExpr(mod).add(prev_mod, -1.0), RowSense::GreaterEqual, 0.0, "keepmod:" + line.id + ys);
      }
      m.investment.add(LinExpr(ex).add(prev_ex, -1.0), line.install_cost[y]);
      m.investment.add(LinExpr(mod).add(prev_mod, -1.0), line.modify_cost[y]);
      for (std::size_t s = 0; s < S; ++s) {
        const std::string sy = "[s" + std::to_string(s) + ",y" + std::to_string(y) + "]";
        const VarRef on = p.add_binary("energized:" + line.id + sy);
        p.add_constraint(LinExpr(on).add(ex, -1.0), RowSense::LessEqual, 0.0, "onlyifexists:" + line.id + sy);
        m.energized(l, s, y) = on;
        m.aux(l, s, y) = milp::linearize_product_bb(p, on, mod, "aux:" + line.id + sy);
        plan.energized(l, s, y) = LinExpr(on);
        plan.aux(l, s, y) = LinExpr(m.aux(l, s, y));
      }
    }
  }

  const double solar_cap = c.config.solar_max_mw.value_or(milp::kInf);
  for (std::size_t i = 0; i < I; ++i) {
    if (!c.buses[i].solar_candidate) continue;
    for (std::size_t y = 0; y < Y; ++y) {
      const std::string name = "solarcap:" + std::to_string(c.buses[i].id) + "[y" + std::to_string(y) + "]";
      const VarRef cap = p.add_continuous(name, 0.0, solar_cap);
      m.solar(i, y) = cap;
      plan.solar(i, y) = LinExpr(cap);
      if (y > 0) {
        p.add_constraint(LinExpr(cap).add(m.solar(i, y - 1), -1.0), RowSense::GreaterEqual, 0.0, name + ":keep");
        m.investment.add(LinExpr(cap).add(m.solar(i, y - 1), -1.0), c.config.solar_cost[y]);
      } else {
        m.investment.add(cap, c.config.solar_cost[y]);
      }
    }
  }

  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t y = 0; y < Y; ++y) m.scores.push_back(add_score_block(p, c, plan, s, y, ""));

  // Periods with identical data share one block: the operating LP of a
  // period depends only on the plan and that period's demand and availability.
  std::map<std::tuple<std::size_t, std::size_t, std::vector<double>, std::vector<double>>, PeriodBlock> shared;
  m.epigraph = p.add_continuous("operating", 0.0, milp::kInf);
  for (std::size_t k = 0; k < realizations.size(); ++k) {
    const RealizedData data = apply_realization(c, realizations[k]);
    const std::string tag = "@r" + std::to_string(k);
    std::vector<PeriodBlock> blocks;
    LinExpr cost;
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t y = 0; y < Y; ++y) {
        auto demand = period_demand(data, s, y);
        auto avail = period_availability(data, s, y);
        auto key = std::make_tuple(s, y, demand, avail);
        auto it = shared.find(key);
        if (it == shared.end())
          it = shared.emplace(std::move(key), add_period_block(p, c, plan, s, y, demand, avail, tag)).first;
        blocks.push_back(it->second);
        cost.add(blocks.back().cost, 1.0 / m.scale);
      }
    p.add_constraint(LinExpr(m.epigraph).add(cost, -1.0), RowSense::GreaterEqual, 0.0, "epigraph" + tag);
    m.blocks.push_back(std::move(blocks));
  }
  m.distinct_blocks = shared.size();

  LinExpr objective(m.epigraph);
  objective.add(m.investment, 1.0 / m.scale);
  p.set_objective(milp::ObjSense::Minimize, objective);
  return m;
}

MasterResult solve_master(const CaseData& c, const MasterModel& m, const milp::SolverBackend& backend,
                          const milp::SolveOptions& options) {
  const milp::MilpSolution sol = backend.solve(m.problem, options);
  if (sol.status == milp::SolveStatus::Infeasible)
    throw RiskInfeasibleError("risk tolerance infeasible with existing assets (master problem has no feasible plan)");
  if (sol.status == milp::SolveStatus::Unbounded) throw SolverError("master problem reported unbounded");
  if (!sol.has_solution()) throw SolverError("master problem: solver stopped without a feasible plan");

  const auto L = c.num_lines(), S = c.num_scenarios(), Y = c.num_years(), I = c.num_buses();
  const auto& x = sol.values;
  auto bin = [&](VarRef v) { return x[static_cast<std::size_t>(v.id)] > 0.5 ? 1 : 0; };
  MasterResult r;
  r.plan = PlanDecision::empty(c);
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t y = 0; y < Y; ++y) {
      r.plan.line_exists(l, y) = bin(m.exists(l, y));
      r.plan.line_modified(l, y) = bin(m.modified(l, y));
      for (std::size_t s = 0; s < S; ++s) {
        r.plan.line_energized(l, s, y) = bin(m.energized(l, s, y));
        r.plan.aux(l, s, y) = r.plan.line_energized(l, s, y) * r.plan.line_modified(l, y);
      }
    }
  for (std::size_t i = 0; i < I; ++i) {
    double prev = 0.0;
    for (std::size_t y = 0; y < Y; ++y) {
      const VarRef v = m.solar(i, y);
      const double cap = v.valid() ? std::max(prev, std::max(0.0, x[static_cast<std::size_t>(v.id)])) : 0.0;
      r.plan.solar_capacity(i, y) = cap;
      prev = cap;
    }
  }
  r.objective = sol.objective * m.scale;
  r.lower_bound = std::min(sol.bound, sol.objective) * m.scale;
  r.operating = x[static_cast<std::size_t>(m.epigraph.id)] * m.scale;
  for (const auto& blocks : m.blocks) {
    DispatchSolution d = empty_dispatch(c);
    for (const PeriodBlock& b : blocks) extract_period(c, b, x, d);
    for (std::size_t k = 0; k < m.scores.size(); ++k) {
      const std::size_t s = k / Y, y = k % Y;
      for (std::size_t l = 0; l < L; ++l) d.score(l, s, y) = x[static_cast<std::size_t>(m.scores[k].score[l].id)];
    }
    r.dispatch.push_back(std::move(d));
  }
  return r;
}

}  // namespace wildgrid
