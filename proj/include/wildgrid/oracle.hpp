#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "wildgrid/model.hpp"

namespace wildgrid {

class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  /// Skip demand-down and solar-up flags, which never raise the cost, and
  /// flags whose effective deviation is zero.
  bool prune = true;
  std::size_t max_vertices = 1'000'000;
};

/// Number of vertices with at most `budget` u-flags and u+v <= 1 per entry.
std::size_t count_realizations(const CaseData& c, int budget, bool prune);

/// Visits every vertex in increasing key order. Throws OracleLimitError when
/// the count exceeds options.max_vertices.
void enumerate_realizations(const CaseData& c, int budget, const OracleOptions& options,
                            const std::function<void(const UncertaintyRealization&)>& visit);
std::vector<UncertaintyRealization> enumerate_realizations(const CaseData& c, int budget,
                                                           const OracleOptions& options = {});

struct WorstCase {
  UncertaintyRealization realization;
  double cost = 0.0;
  std::size_t vertices = 0;
  std::size_t lp_solves = 0;
};

/// Maximum operating cost over all vertices for the case's budget; ties go
/// to the smallest key.
WorstCase worst_case_brute_force(const CaseData& c, const PlanDecision& plan, const OracleOptions& options = {});

}  // namespace wildgrid
