#pragma once

#include <memory>
#include <string>

#include "wildgrid/milp/problem.hpp"

namespace wildgrid::milp {

/// HiGHS through its C API, resolved at run time with dlopen so the build
/// does not depend on it. The library is looked up at $WILDGRID_HIGHS_LIBRARY,
/// then the path configured at build time, then the default loader path.
class HighsBackend final : public SolverBackend {
 public:
  HighsBackend();
  ~HighsBackend() override;
  HighsBackend(const HighsBackend&) = delete;
  HighsBackend& operator=(const HighsBackend&) = delete;

  /// True when a usable libhighs can be loaded.
  static bool available();

  MilpSolution solve(const MilpProblem& problem, const SolveOptions& options) const override;
  std::string name() const override { return "highs"; }

 private:
  struct Api;
  std::unique_ptr<Api> api_;
};

}  // namespace wildgrid::milp
