#pragma once

#include <vector>

#include "wildgrid/milp/problem.hpp"
#include "wildgrid/model.hpp"
#include "wildgrid/recourse.hpp"

namespace wildgrid {

struct MasterModel {
  milp::MilpProblem problem;
  Grid2<milp::VarRef> exists, modified;  // [l][y]
  Grid3<milp::VarRef> energized, aux;    // [l][s][y]
  Grid2<milp::VarRef> solar;             // [i][y], invalid at non-candidate buses
  std::vector<ScoreBlock> scores;        // per (s, y), s-major
  milp::VarRef epigraph;                 // operating cost, scaled
  milp::LinExpr investment;              // dollars
  std::vector<std::vector<PeriodBlock>> blocks;  // [realization][(s, y)], may alias
  std::size_t distinct_blocks = 0;
  double scale = 1.0;                    // objective units -> dollars
};

/// First-stage problem over the given realizations; realization 0 must be
/// the nominal vertex. Throws ConfigError on an invalid case or empty list.
MasterModel build_master(const CaseData& c, const std::vector<UncertaintyRealization>& realizations);

struct MasterResult {
  PlanDecision plan;
  double objective = 0.0;    // dollars, incumbent
  double lower_bound = 0.0;  // dollars, proven
  double operating = 0.0;    // epigraph value, dollars
  std::vector<DispatchSolution> dispatch;  // per realization
};

/// Throws RiskInfeasibleError when no plan meets the risk tolerance and
/// SolverError when the backend returns no incumbent.
MasterResult solve_master(const CaseData& c, const MasterModel& m, const milp::SolverBackend& backend,
                          const milp::SolveOptions& options);

}  // namespace wildgrid
