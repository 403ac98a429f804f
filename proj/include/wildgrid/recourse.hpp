#pragma once

// Operating (second-stage) constraints for one scenario-year, shared by the
// master copies and the fixed-plan recourse LP.

#include <string>
#include <vector>

#include "wildgrid/milp/problem.hpp"
#include "wildgrid/model.hpp"

namespace wildgrid {

/// First-stage quantities seen by the operating constraints. In the master
/// these are variables; for a fixed plan they are constants.
struct PlanExprs {
  Grid2<milp::LinExpr> exists;     // [l][y]
  Grid3<milp::LinExpr> energized;  // [l][s][y]
  Grid3<milp::LinExpr> aux;        // [l][s][y]
  Grid2<milp::LinExpr> solar;      // [i][y]

  static PlanExprs constant(const CaseData& c, const PlanDecision& plan);
};

/// Ignition score variables of one scenario-year with their lower bounds and
/// the risk budget row.
struct ScoreBlock {
  std::vector<milp::VarRef> score;  // per line
  int budget_row = -1;
};

ScoreBlock add_score_block(milp::MilpProblem& p, const CaseData& c, const PlanExprs& plan, std::size_t s,
                           std::size_t y, const std::string& tag);

struct PeriodBlock {
  std::size_t s = 0, y = 0;
  std::vector<milp::VarRef> gen;                  // per generator
  std::vector<std::vector<milp::VarRef>> segment; // [g][z]
  std::vector<milp::VarRef> solar;                // per bus, invalid where no candidate
  std::vector<milp::VarRef> served;               // per bus
  std::vector<milp::VarRef> angle;                // per bus
  std::vector<milp::VarRef> flow;                 // per line
  std::vector<double> demand;                     // scheduled demand used
  /// R_s * (segment costs + K * (demand - served)), with the K*R_s*demand
  /// part as the constant.
  milp::LinExpr cost;
};

/// Adds dispatch, balance, switched DC flow and thermal limits for (s, y).
/// `demand` and `availability` are the realized per-bus values.
PeriodBlock add_period_block(milp::MilpProblem& p, const CaseData& c, const PlanExprs& plan, std::size_t s,
                             std::size_t y, const std::vector<double>& demand,
                             const std::vector<double>& availability, const std::string& tag);

/// Realized demand and availability of one scenario-year, per bus.
std::vector<double> period_demand(const RealizedData& d, std::size_t s, std::size_t y);
std::vector<double> period_availability(const RealizedData& d, std::size_t s, std::size_t y);

/// Fills the (s, y) slices of a dispatch from solver values.
void extract_period(const CaseData& c, const PeriodBlock& b, const std::vector<double>& values, DispatchSolution& out);
DispatchSolution empty_dispatch(const CaseData& c);

/// Objective scale shared by both stages: K times the longest scenario.
double cost_scale(const CaseData& c);

}  // namespace wildgrid
