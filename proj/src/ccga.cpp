#include "wildgrid/ccga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>

#include "wildgrid/master.hpp"
#include "wildgrid/milp/branch_and_bound.hpp"
#include "wildgrid/milp/lp_writer.hpp"
#include "wildgrid/recourse.hpp"
#include "wildgrid/subproblem.hpp"

namespace wildgrid {

bool check_convergence(double lb, double ub, double eps) {
  if (!std::isfinite(lb) || !std::isfinite(ub)) return false;
  return ub - lb <= eps;
}

double effective_epsilon(const PlanningConfig& cfg, double ub) {
  if (cfg.epsilon_mode == EpsilonMode::Absolute) return cfg.epsilon;
  return cfg.epsilon * std::max(1.0, std::isfinite(ub) ? std::abs(ub) : 1.0);
}

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RobustPlanResult solve(const CaseData& c, const CcgaOptions& options) {
  if (!(c.config.epsilon > 0.0)) throw ConfigError("ccga: epsilon must be positive");
  if (const auto errs = validate_case(c); !errs.empty()) throw ConfigError("ccga: invalid case: " + errs.front());
  const auto backend = milp::make_backend(options.solver);
  milp::SolveOptions so;
  so.seed = options.seed;
  if (options.time_limit_s > 0.0) so.time_limit_s = options.time_limit_s;
  // Each stage may spend a quarter of the stopping tolerance. Both problems
  // are solved in units of cost_scale dollars.
  if (c.config.epsilon_mode == EpsilonMode::Relative)
    so.rel_gap = std::max(so.rel_gap, c.config.epsilon / 4.0);
  else
    so.abs_gap = std::max(1e-9, std::min(so.abs_gap, c.config.epsilon / (4.0 * cost_scale(c))));
  SubproblemOptions sub_opt;
  sub_opt.dual_cap = options.dual_cap;
  if (options.dump_lp_dir) std::filesystem::create_directories(*options.dump_lp_dir);

  RobustPlanResult res;
  res.timings_recorded = options.record_timings;
  res.realizations.push_back(UncertaintyRealization::nominal(c));
  double lb = -std::numeric_limits<double>::infinity();
  double ub = std::numeric_limits<double>::infinity();

  for (int k = 1; k <= std::max(1, c.config.max_iterations); ++k) {
    IterationRecord rec;
    rec.iteration = k;

    auto t0 = std::chrono::steady_clock::now();
    const MasterModel master = build_master(c, res.realizations);
    if (options.dump_lp_dir)
      milp::write_lp_file(*options.dump_lp_dir + "/master_" + std::to_string(k) + ".lp", master.problem,
                          "master, iteration " + std::to_string(k));
    MasterResult mr = solve_master(c, master, *backend, so);
    if (options.record_timings) rec.master_ms = ms_since(t0);
    lb = std::max(lb, mr.lower_bound);

    t0 = std::chrono::steady_clock::now();
    if (options.dump_lp_dir) {
      const SubproblemModel sm = build_subproblem(c, mr.plan, sub_opt);
      milp::write_lp_file(*options.dump_lp_dir + "/subproblem_" + std::to_string(k) + ".lp", sm.problem,
                          "worst-case subproblem, iteration " + std::to_string(k));
    }
    const SubproblemResult sr = solve_subproblem(c, mr.plan, *backend, so, sub_opt);
    if (options.record_timings) rec.subproblem_ms = ms_since(t0);

    const InvestmentCost inv = investment_cost(c, mr.plan);
    const bool improved = inv.total() + sr.bound < ub;
    ub = std::min(ub, inv.total() + sr.bound);

    rec.lb = lb;
    rec.ub = ub;
    rec.master_objective = mr.objective;
    rec.investment = inv.total();
    rec.worst_operating = sr.worst_cost;
    rec.realization = sr.realization;
    res.iterations.push_back(rec);
    if (options.on_iteration) options.on_iteration(rec);

    // The reported plan is the one that attains the upper bound.
    if (improved || k == 1) {
      res.plan = mr.plan;
      res.dispatch = std::move(mr.dispatch);
      res.worst_realization = sr.realization;
      res.investment = inv;
      res.worst_operating = sr.worst_cost;
    }
    res.lb = lb;
    res.ub = ub;
    res.epsilon = effective_epsilon(c.config, ub);

    if (check_convergence(lb, ub, res.epsilon)) {
      res.converged = true;
      break;
    }
    if (std::find(res.realizations.begin(), res.realizations.end(), sr.realization) != res.realizations.end()) {
      res.converged = true;
      res.duplicate_vertex = true;
      break;
    }
    res.realizations.push_back(sr.realization);
  }
  return res;
}

}  // namespace wildgrid
