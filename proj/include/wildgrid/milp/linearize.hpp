#pragma once

#include "wildgrid/milp/problem.hpp"

namespace wildgrid::milp {

/// Adds w in [0,1] with w <= x, w <= y, w >= x + y - 1, so w = x*y whenever
/// x and y are integral. Throws std::invalid_argument for non-binary inputs.
VarRef linearize_product_bb(MilpProblem& p, VarRef x, VarRef y, const std::string& name = {});

struct BinaryContinuousProduct {
  VarRef nu;     // v * mu
  VarRef omega;  // (1 - v) * mu
};

/// Exact product of a binary v and a continuous mu in [0, M]:
/// nu = mu - omega, 0 <= nu <= M v, 0 <= omega <= M (1 - v).
/// M defaults to the upper bound of mu; mu must be nonnegative and bounded.
BinaryContinuousProduct linearize_product_bc(MilpProblem& p, VarRef v, VarRef mu, double big_m = 0.0,
                                             const std::string& name = {});

}  // namespace wildgrid::milp
