#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wildgrid/ccga.hpp"
#include "wildgrid/errors.hpp"
#include "wildgrid/ingest.hpp"
#include "wildgrid/milp/branch_and_bound.hpp"
#include "wildgrid/oracle.hpp"
#include "wildgrid/report.hpp"
#include "wildgrid/subproblem.hpp"

using namespace wildgrid;

namespace {

enum Exit { kOk = 0, kValidation = 1, kInfeasible = 2, kNoConvergence = 3, kVerifyMismatch = 4 };

struct CaseArgs {
  std::string path;
  std::optional<std::string> scenario;
  CaseOverrides ov;
};

void add_case_flags(CLI::App* cmd, CaseArgs& a) {
  cmd->add_option("--case", a.path, "case file (JSON)")->required();
  cmd->add_option("--scenario", a.scenario, "study a single scenario, which then covers all 8760 h");
  cmd->add_option("--years", a.ov.years, "truncate the horizon to N years");
  cmd->add_option("--uncertainty", a.ov.uncertainty, "deviation fraction for defaulted demand/solar deviations");
  cmd->add_option("--budget", a.ov.budget, "uncertainty budget E");
  cmd->add_option("--risk-tolerance", a.ov.risk_tolerance, "ignition score cap per scenario-year");
  cmd->add_option("--shed-penalty", a.ov.shed_penalty, "load shedding penalty, $/MWh");
  cmd->add_option("--segments", a.ov.segments, "piecewise cost segments per generator");
  cmd->add_option("--epsilon", a.ov.epsilon, "convergence tolerance");
  cmd->add_option("--max-iters", a.ov.max_iterations, "iteration cap");
}

void add_solver_flags(CLI::App* cmd, CcgaOptions& o) {
  cmd->add_option("--solver", o.solver, "bundled | highs | auto")
      ->check(CLI::IsMember({"bundled", "highs", "auto"}));
  cmd->add_option("--seed", o.seed, "solver seed");
  cmd->add_option("--time-limit", o.time_limit_s, "seconds per MILP solve (0 = none)");
}

CaseData load(const CaseArgs& a, bool verbose) {
  LoadedCase lc = load_case(a.path, a.ov);
  if (verbose)
    for (const auto& p : lc.provenance) std::cerr << "default: " << p << "\n";
  return a.scenario ? restrict_to_scenario(lc.data, *a.scenario) : lc.data;
}

void print_summary(const CaseData& c, const RobustPlanResult& r, const Report& rep) {
  double lines = 0, mod = 0, solar = 0, op = 0, total = 0;
  for (const auto& row : rep.costs) {
    lines += row.invest_lines;
    mod += row.invest_mod;
    solar += row.invest_solar;
    op += row.operation;
    total += row.total;
  }
  std::printf("status      %s after %zu iteration(s)%s\n", r.converged ? "converged" : "NOT converged",
              r.iterations.size(), r.duplicate_vertex ? " (repeated vertex)" : "");
  std::printf("bounds      lb %.6f  ub %.6f  gap %.6f  (eps %.6g)\n", r.lb, r.ub, r.ub - r.lb, r.epsilon);
  std::printf("investment  lines %.2f  modification %.2f  solar %.2f\n", lines, mod, solar);
  std::printf("operation   %.2f\n", op);
  std::printf("total       %.2f\n", total);
  std::printf("shed MWh by year:");
  for (std::size_t y = 0; y < c.num_years(); ++y) {
    double mwh = 0;
    for (const auto& s : rep.shedding)
      if (s.year == static_cast<int>(y) + 1) mwh += s.mwh;
    std::printf(" %.3f", mwh);
  }
  std::printf("\n");
}

int run_plan(const CaseArgs& a, CcgaOptions o, const std::string& out_dir, const std::string& which,
             bool dump_lp) {
  const CaseData c = load(a, true);
  if (dump_lp) o.dump_lp_dir = out_dir + "/lp";
  o.on_iteration = [](const IterationRecord& it) {
    std::fprintf(stderr, "iter %2d  lb %.6f  ub %.6f  master %.0f ms  sub %.0f ms\n", it.iteration, it.lb, it.ub,
                 it.master_ms, it.subproblem_ms);
  };
  const RobustPlanResult r = solve(c, o);
  const auto mode = which == "nominal" ? ReportRealization::Nominal : ReportRealization::Worst;
  const auto files = write_result(c, r, out_dir, mode);
  print_summary(c, r, build_report(c, r, mode));
  for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
  return r.converged ? kOk : kNoConvergence;
}

int run_verify(const CaseArgs& a, const CcgaOptions& o) {
  const CaseData c = load(a, false);
  const RobustPlanResult r = solve(c, o);
  const auto backend = milp::make_backend(o.solver);
  const SubproblemResult sub = solve_subproblem(c, r.plan, *backend);
  const WorstCase wc = worst_case_brute_force(c, r.plan);
  const double diff = std::abs(sub.worst_cost - wc.cost);
  const double tol = 1e-6 * (1.0 + std::abs(wc.cost));
  std::printf("subproblem   %.9f\n", sub.worst_cost);
  std::printf("brute force  %.9f over %zu vertices (%zu LP solves)\n", wc.cost, wc.vertices, wc.lp_solves);
  std::printf("difference   %.3e (tolerance %.3e)\n", diff, tol);
  bool ok = diff <= tol;
  // Every enumerated vertex must be priced below the upper bound.
  const double cap = r.ub - r.investment.total() + 1e-6 * (1.0 + std::abs(r.ub));
  if (wc.cost > cap) {
    std::printf("robustness   FAILED: worst case %.9f exceeds ub - investment %.9f\n", wc.cost, cap);
    ok = false;
  }
  std::printf("%s\n", ok ? "verify: PASS" : "verify: FAIL");
  return ok ? kOk : kVerifyMismatch;
}

int run_validate(const CaseArgs& a) {
  const CaseData c = load(a, true);
  std::printf("valid case: %zu buses, %zu generators, %zu lines, %zu scenarios, %zu years\n", c.num_buses(),
              c.num_generators(), c.num_lines(), c.num_scenarios(), c.num_years());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust multi-year grid expansion planning under wildfire ignition risk"};
  app.require_subcommand(1);

  CaseArgs plan_args, verify_args, validate_args;
  CcgaOptions plan_opt, verify_opt;
  std::string out_dir = "out", which = "worst";
  bool dump_lp = false, no_timings = false;

  auto* plan = app.add_subcommand("plan", "solve a case and write the CSV reports");
  add_case_flags(plan, plan_args);
  add_solver_flags(plan, plan_opt);
  plan->add_option("--output-dir", out_dir, "directory for CSV output");
  plan->add_flag("--dump-lp", dump_lp, "write every master and subproblem as an LP file under <output-dir>/lp");
  plan->add_option("--report-realization", which, "worst | nominal")->check(CLI::IsMember({"worst", "nominal"}));
  plan->add_flag("--no-timings", no_timings, "leave the timing columns of ccga_trace.csv empty");

  auto* verify = app.add_subcommand("verify", "solve, then cross-check the worst case against enumeration");
  add_case_flags(verify, verify_args);
  add_solver_flags(verify, verify_opt);

  auto* validate = app.add_subcommand("validate", "load and validate a case file");
  add_case_flags(validate, validate_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) {
      plan_opt.record_timings = !no_timings;
      return run_plan(plan_args, plan_opt, out_dir, which, dump_lp);
    }
    if (verify->parsed()) return run_verify(verify_args, verify_opt);
    return run_validate(validate_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const RiskInfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const RecourseInfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const OracleLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
}
