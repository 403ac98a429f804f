#pragma once

#include <cstdint>
#include <vector>

#include "wildgrid/milp/problem.hpp"

namespace wildgrid::milp {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

/// Basis snapshot used to warm-start a related LP (same rows and columns,
/// different bounds).
struct LpBasis {
  std::vector<int> basic;           // one variable per row; ids >= n are row logicals
  std::vector<std::int8_t> state;   // per variable, see DenseSimplex::State
};

/// Bounded-variable revised primal simplex with an explicit dense basis
/// inverse. Rows are turned into equalities a_r x - s_r = 0 with the row
/// bounds carried by the logical s_r. Phase 1 minimizes the sum of bound
/// infeasibilities of the basic variables. Binary markings are ignored: this
/// solves the continuous relaxation.
class DenseSimplex {
 public:
  enum State : std::int8_t { Basic = 0, AtLower = 1, AtUpper = 2, FreeZero = 3 };

  explicit DenseSimplex(const MilpProblem& problem);

  void set_bounds(int var, double lo, double hi);
  void reset_bounds();

  LpStatus solve(const LpBasis* warm = nullptr);

  /// Objective in the problem's own sense, including its constant.
  double objective() const;
  /// Structural variable values.
  std::vector<double> primal() const;
  LpBasis basis() const;
  long iterations() const { return iterations_; }

 private:
  template <class F>
  void for_column(int j, F&& f) const;
  double nonbasic_value(int j) const;
  State default_state(int j) const;
  void load_basis(const LpBasis& b);
  void cold_basis();
  bool refactor();
  void compute_basic_values();
  LpStatus iterate();
  double feas_tol(double bound) const { return 1e-9 * (1.0 + (bound < 0 ? -bound : bound)); }

  int n_ = 0;  // structural variables
  int m_ = 0;  // rows
  std::vector<int> col_start_, col_index_;
  std::vector<double> col_value_;
  std::vector<double> cost_;  // minimization form
  double cost_const_ = 0.0;
  double sign_ = 1.0;
  double dual_tol_ = 1e-9;
  std::vector<double> base_lo_, base_hi_, lo_, hi_, x_;
  std::vector<State> state_;
  std::vector<int> head_;
  std::vector<double> binv_;  // m x m, row-major
  long iterations_ = 0;
  long iteration_limit_ = 0;
  int since_refactor_ = 0;
};

}  // namespace wildgrid::milp
