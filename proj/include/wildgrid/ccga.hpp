#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wildgrid/model.hpp"

namespace wildgrid {

struct IterationRecord {
  int iteration = 0;  // 1-based
  double lb = 0.0, ub = 0.0;
  double master_objective = 0.0;  // incumbent, dollars
  double investment = 0.0;        // of this iteration's plan
  double worst_operating = 0.0;   // subproblem value for this iteration's plan
  UncertaintyRealization realization;
  double master_ms = 0.0, subproblem_ms = 0.0;
};

struct RobustPlanResult {
  PlanDecision plan;
  double lb = -1.0, ub = -1.0;
  double epsilon = 0.0;  // tolerance actually applied
  bool converged = false;
  bool duplicate_vertex = false;
  bool timings_recorded = false;
  std::vector<IterationRecord> iterations;
  std::vector<UncertaintyRealization> realizations;  // master columns, nominal first
  UncertaintyRealization worst_realization;
  std::vector<DispatchSolution> dispatch;  // final master dispatch per realization
  InvestmentCost investment;
  double worst_operating = 0.0;
};

struct CcgaOptions {
  std::string solver = "auto";  // bundled | highs | auto
  std::uint64_t seed = 0;
  double time_limit_s = 0.0;    // per solve; 0 = none
  bool record_timings = true;
  double dual_cap = 10.0;
  /// When set, every master and subproblem is written here as an LP file.
  std::optional<std::string> dump_lp_dir;
  /// Called after every iteration, e.g. for progress output.
  std::function<void(const IterationRecord&)> on_iteration;
};

/// True iff ub - lb <= eps.
bool check_convergence(double lb, double ub, double eps);

/// Tolerance for the stopping test under the case's epsilon mode.
double effective_epsilon(const PlanningConfig& cfg, double ub);

/// Alternates master and worst-case subproblem until the bounds meet, a
/// vertex repeats or the iteration cap is reached.
RobustPlanResult solve(const CaseData& c, const CcgaOptions& options = {});

}  // namespace wildgrid
