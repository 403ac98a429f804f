#pragma once

#include <vector>

#include "wildgrid/milp/problem.hpp"

namespace wildgrid::milp {

/// Upper bound of a primal variable that moves with a selector:
/// hi_j + coef * flag. The flag lives in the target problem.
struct BoundShift {
  int var = -1;
  VarRef flag;
  double coef = 0.0;
};

struct DualizeOptions {
  std::vector<BoundShift> shifts;
  /// Upper bound on the duals of shifted bounds; also the big-M of the
  /// product linearization.
  double shifted_dual_cap = 10.0;
  /// The primal objective is divided by this before dualizing.
  double objective_scale = 1.0;
};

/// Dual variables of one primal entity. A side is invalid when the bound on
/// that side is infinite; equalities and fixed variables carry a single free
/// dual in `pos`.
struct DualPair {
  VarRef pos;  // multiplies the lower bound
  VarRef neg;  // multiplies the upper bound
};

struct DualBlock {
  std::vector<DualPair> rows;
  std::vector<DualPair> vars;
  /// Dual objective (scaled units), including the linearized shift terms.
  LinExpr objective;
};

/// Appends the LP dual of a minimization primal (binary markings ignored):
///   max  sum lo*pos - hi*neg   s.t.  A^T (pos_r - neg_r) + pos_j - neg_j = c / scale.
/// Variables with shifted upper bounds always get split, capped duals, and
/// each flag product is linearized exactly.
DualBlock append_dual(MilpProblem& target, const MilpProblem& primal, const DualizeOptions& options);

}  // namespace wildgrid::milp
