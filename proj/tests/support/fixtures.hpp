#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wildgrid/model.hpp"

namespace wildgrid::testing {

struct RandomCaseShape {
  int max_buses = 3;
  int max_scenarios = 2;
  int max_years = 2;
  int budget = 1;
};

/// Small connected case: a chain of existing lines plus one candidate,
/// generator at bus 0, p_min = 0 so every plan has a feasible dispatch.
CaseData random_case(std::mt19937_64& rng, const RandomCaseShape& shape = {});

/// Plan satisfying every structural invariant of check_plan.
PlanDecision random_plan(const CaseData& c, std::mt19937_64& rng);

/// random_plan with energized lines switched off, highest score first,
/// until every period meets the risk tolerance.
PlanDecision risk_feasible_plan(const CaseData& c, std::mt19937_64& rng);

/// Vertex with u+v <= 1 per entry and at most `budget` u-flags.
UncertaintyRealization random_realization(const CaseData& c, std::mt19937_64& rng, int budget);

/// Plan with every existing line energized, nothing built, no solar.
PlanDecision status_quo_plan(const CaseData& c);

/// Two buses, one scenario, one year, no solar: generator at bus 1, load at
/// bus 2, existing line L1 and candidate L2 in parallel.
CaseData tiny_case(int budget);

/// Physical checks of a dispatch under plan: bus balance, generator and
/// segment bounds, line ratings, switched DC flow with the base factor,
/// served <= scheduled, and the per-period risk budget. Empty when clean.
std::vector<std::string> audit_dispatch(const CaseData& c, const PlanDecision& plan, const DispatchSolution& d,
                                        double tol = 1e-6);

}  // namespace wildgrid::testing
