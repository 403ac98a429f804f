#pragma once

#include <memory>
#include <string>

#include "wildgrid/milp/problem.hpp"

namespace wildgrid::milp {

/// Best-first branch and bound over the bundled simplex. Branches on the
/// most fractional binary (lowest id on ties); nodes with equal bounds are
/// expanded in creation order.
MilpSolution solve_branch_and_bound(const MilpProblem& problem, const SolveOptions& options = {});

class BranchAndBound final : public SolverBackend {
 public:
  MilpSolution solve(const MilpProblem& problem, const SolveOptions& options) const override {
    return solve_branch_and_bound(problem, options);
  }
  std::string name() const override { return "bundled"; }
};

/// "bundled", "highs", or "auto" (HiGHS when loadable, else bundled).
std::unique_ptr<SolverBackend> make_backend(const std::string& which);

}  // namespace wildgrid::milp
