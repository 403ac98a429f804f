#pragma once

#include <stdexcept>

namespace wildgrid {

/// The master problem has no feasible plan: the risk tolerance cannot be met
/// even by the cheapest set of energization decisions.
class RiskInfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fixed plan admits no feasible dispatch for some uncertainty vertex
/// (the worst-case dual is unbounded).
class RecourseInfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver returned no usable answer (limits hit without an incumbent).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wildgrid
