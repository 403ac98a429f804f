#include "wildgrid/milp/dualize.hpp"

#include <cmath>
#include <string>

#include "wildgrid/milp/linearize.hpp"

namespace wildgrid::milp {

namespace {

// Adds the dual variables for the bound pair [lo, hi] and their objective
// contribution; returns the pair.
DualPair add_bound_duals(MilpProblem& t, LinExpr& obj, const std::string& name, double lo, double hi, bool split,
                         double neg_cap) {
  DualPair d;
  const bool has_lo = std::isfinite(lo), has_hi = std::isfinite(hi);
  if (!split && has_lo && has_hi && lo == hi) {
    d.pos = t.add_continuous("dual:" + name, -kInf, kInf);
    obj.add(d.pos, lo);
    return d;
  }
  if (has_lo) {
    d.pos = t.add_continuous("dual:" + name + ":lo", 0.0, kInf);
    obj.add(d.pos, lo);
  }
  if (has_hi) {
    d.neg = t.add_continuous("dual:" + name + ":hi", 0.0, neg_cap);
    obj.add(d.neg, -hi);
  }
  return d;
}

}  // namespace

DualBlock append_dual(MilpProblem& t, const MilpProblem& p, const DualizeOptions& opt) {
  if (p.sense() != ObjSense::Minimize) throw std::invalid_argument("append_dual: primal must minimize");
  if (!(opt.objective_scale > 0.0)) throw std::invalid_argument("append_dual: objective scale must be positive");
  const std::size_t n = p.num_vars(), m = p.num_rows();
  std::vector<char> shifted(n, 0);
  for (const BoundShift& s : opt.shifts) {
    if (s.var < 0 || static_cast<std::size_t>(s.var) >= n) throw std::out_of_range("append_dual: shift variable");
    if (!std::isfinite(p.variables()[static_cast<std::size_t>(s.var)].hi))
      throw std::invalid_argument("append_dual: shifted variable needs a finite upper bound");
    shifted[static_cast<std::size_t>(s.var)] = 1;
  }

  DualBlock out;
  out.objective.add_constant(p.objective_constant() / opt.objective_scale);
  out.rows.reserve(m);
  for (const Constraint& r : p.constraints())
    out.rows.push_back(add_bound_duals(t, out.objective, r.name, r.lo, r.hi, false, kInf));
  out.vars.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Variable& v = p.variables()[j];
    out.vars.push_back(add_bound_duals(t, out.objective, v.name, v.lo, v.hi, shifted[j] != 0,
                                       shifted[j] ? opt.shifted_dual_cap : kInf));
  }

  std::vector<LinExpr> cols(n);
  for (std::size_t r = 0; r < m; ++r) {
    const DualPair& d = out.rows[r];
    for (const Term& term : p.constraints()[r].terms) {
      LinExpr& col = cols[static_cast<std::size_t>(term.var)];
      if (d.pos.valid()) col.add(d.pos, term.coef);
      if (d.neg.valid()) col.add(d.neg, -term.coef);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const DualPair& d = out.vars[j];
    if (d.pos.valid()) cols[j].add(d.pos, 1.0);
    if (d.neg.valid()) cols[j].add(d.neg, -1.0);
    t.add_constraint(cols[j], RowSense::Equal, p.objective_coefficients()[j] / opt.objective_scale,
                     "dualrow:" + p.variables()[j].name);
  }

  // -(hi + coef*flag) * neg  =>  extra term -coef * (flag * neg).
  for (const BoundShift& s : opt.shifts) {
    if (s.coef == 0.0) continue;
    const VarRef neg = out.vars[static_cast<std::size_t>(s.var)].neg;
    const BinaryContinuousProduct prod = linearize_product_bc(t, s.flag, neg, opt.shifted_dual_cap);
    out.objective.add(prod.nu, -s.coef);
  }
  return out;
}

}  // namespace wildgrid::milp
