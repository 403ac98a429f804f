#include "wildgrid/milp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace wildgrid::milp {

LinExpr& LinExpr::add(const LinExpr& e, double scale) {
  for (const Term& t : e.terms_) {
    if (t.coef * scale != 0.0) terms_.push_back({t.var, t.coef * scale});
  }
  constant_ += e.constant_ * scale;
  return *this;
}

double LinExpr::evaluate(std::span<const double> values) const {
  double v = constant_;
  for (const Term& t : terms_) v += t.coef * values[static_cast<std::size_t>(t.var)];
  return v;
}

VarRef MilpProblem::add_continuous(std::string name, double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi)
    throw std::invalid_argument("add_continuous: bad bounds for " + name);
  vars_.push_back({std::move(name), VarKind::Continuous, lo, hi});
  obj_.push_back(0.0);
  return VarRef{static_cast<int>(vars_.size() - 1)};
}

VarRef MilpProblem::add_binary(std::string name) {
  vars_.push_back({std::move(name), VarKind::Binary, 0.0, 1.0});
  obj_.push_back(0.0);
  return VarRef{static_cast<int>(vars_.size() - 1)};
}

void MilpProblem::set_bounds(VarRef v, double lo, double hi) {
  Variable& var = vars_.at(static_cast<std::size_t>(v.id));
  if (std::isnan(lo) || std::isnan(hi) || lo > hi)
    throw std::invalid_argument("set_bounds: bad bounds for " + var.name);
  if (var.kind == VarKind::Binary && (lo < 0.0 || hi > 1.0))
    throw std::invalid_argument("set_bounds: binary bounds must lie in [0,1] for " + var.name);
  var.lo = lo;
  var.hi = hi;
}

namespace {

std::vector<Term> merge_terms(const std::vector<Term>& terms, std::size_t nvars) {
  std::map<int, double> acc;
  for (const Term& t : terms) {
    if (t.var < 0 || static_cast<std::size_t>(t.var) >= nvars)
      throw std::invalid_argument("constraint references an unregistered variable");
    if (!std::isfinite(t.coef)) throw std::invalid_argument("constraint coefficient is not finite");
    acc[t.var] += t.coef;
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto [v, c] : acc)
    if (c != 0.0) out.push_back({v, c});
  return out;
}

}  // namespace

int MilpProblem::add_range(const LinExpr& expr, double lo, double hi, std::string name) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) throw std::invalid_argument("add_range: lo > hi");
  Constraint row;
  row.name = name.empty() ? "c" + std::to_string(rows_.size()) : std::move(name);
  row.terms = merge_terms(expr.terms(), vars_.size());
  row.lo = lo - expr.constant();
  row.hi = hi - expr.constant();
  rows_.push_back(std::move(row));
  return static_cast<int>(rows_.size() - 1);
}

int MilpProblem::add_constraint(const LinExpr& lhs, RowSense sense, double rhs, std::string name) {
  switch (sense) {
    case RowSense::LessEqual:
      return add_range(lhs, -kInf, rhs, std::move(name));
    case RowSense::GreaterEqual:
      return add_range(lhs, rhs, kInf, std::move(name));
    case RowSense::Equal:
      return add_range(lhs, rhs, rhs, std::move(name));
  }
  return -1;
}

void MilpProblem::set_objective(ObjSense sense, const LinExpr& objective) {
  sense_ = sense;
  std::fill(obj_.begin(), obj_.end(), 0.0);
  for (const Term& t : merge_terms(objective.terms(), vars_.size())) obj_[static_cast<std::size_t>(t.var)] = t.coef;
  obj_const_ = objective.constant();
}

std::size_t MilpProblem::num_binaries() const {
  return static_cast<std::size_t>(
      std::count_if(vars_.begin(), vars_.end(), [](const Variable& v) { return v.kind == VarKind::Binary; }));
}

double MilpProblem::evaluate_objective(std::span<const double> values) const {
  double v = obj_const_;
  for (std::size_t j = 0; j < obj_.size(); ++j) v += obj_[j] * values[j];
  return v;
}

double MilpProblem::max_violation(std::span<const double> values) const {
  auto viol = [](double x, double lo, double hi) {
    double v = 0.0;
    if (x < lo) v = (lo - x) / (1.0 + std::abs(lo));
    if (x > hi) v = (x - hi) / (1.0 + std::abs(hi));
    return v;
  };
  double worst = 0.0;
  for (const Constraint& r : rows_) {
    double ax = 0.0;
    for (const Term& t : r.terms) ax += t.coef * values[static_cast<std::size_t>(t.var)];
    worst = std::max(worst, viol(ax, r.lo, r.hi));
  }
  for (std::size_t j = 0; j < vars_.size(); ++j) worst = std::max(worst, viol(values[j], vars_[j].lo, vars_[j].hi));
  return worst;
}

double MilpProblem::max_integrality_violation(std::span<const double> values) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    if (vars_[j].kind == VarKind::Binary) worst = std::max(worst, std::abs(values[j] - std::round(values[j])));
  }
  return worst;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::Unbounded:
      return "unbounded";
    case SolveStatus::IterationLimit:
      return "iteration-limit";
  }
  return "unknown";
}

}  // namespace wildgrid::milp
