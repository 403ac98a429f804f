#include "wildgrid/milp/linearize.hpp"

#include <cmath>

namespace wildgrid::milp {

VarRef linearize_product_bb(MilpProblem& p, VarRef x, VarRef y, const std::string& name) {
  if (p.variable(x).kind != VarKind::Binary || p.variable(y).kind != VarKind::Binary)
    throw std::invalid_argument("linearize_product_bb: both factors must be binary");
  const std::string base = name.empty() ? p.variable(x).name + "*" + p.variable(y).name : name;
  const VarRef w = p.add_continuous(base, 0.0, 1.0);
  p.add_constraint(LinExpr(w).add(x, -1.0), RowSense::LessEqual, 0.0, base + ":le_x");
  p.add_constraint(LinExpr(w).add(y, -1.0), RowSense::LessEqual, 0.0, base + ":le_y");
  p.add_constraint(LinExpr(w).add(x, -1.0).add(y, -1.0), RowSense::GreaterEqual, -1.0, base + ":ge_sum");
  return w;
}

BinaryContinuousProduct linearize_product_bc(MilpProblem& p, VarRef v, VarRef mu, double big_m,
                                             const std::string& name) {
  if (p.variable(v).kind != VarKind::Binary)
    throw std::invalid_argument("linearize_product_bc: selector must be binary");
  const Variable& m = p.variable(mu);
  if (!std::isfinite(m.hi)) throw std::invalid_argument("linearize_product_bc: " + m.name + " has no finite upper bound");
  if (m.lo < 0.0) throw std::invalid_argument("linearize_product_bc: " + m.name + " may be negative");
  if (big_m == 0.0) big_m = m.hi;
  if (!(big_m >= m.hi)) throw std::invalid_argument("linearize_product_bc: M is below the upper bound of " + m.name);
  const std::string base = name.empty() ? p.variable(v).name + "*" + m.name : name;
  const VarRef nu = p.add_continuous(base + ":nu", 0.0, big_m);
  const VarRef omega = p.add_continuous(base + ":omega", 0.0, big_m);
  p.add_constraint(LinExpr(nu).add(mu, -1.0).add(omega, 1.0), RowSense::Equal, 0.0, base + ":split");
  p.add_constraint(LinExpr(nu).add(v, -big_m), RowSense::LessEqual, 0.0, base + ":on");
  p.add_constraint(LinExpr(omega).add(v, big_m), RowSense::LessEqual, big_m, base + ":off");
  return {nu, omega};
}

}  // namespace wildgrid::milp
