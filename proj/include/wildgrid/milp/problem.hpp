#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wildgrid::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };

/// Opaque handle to a variable registered in a MilpProblem.
struct VarRef {
  int id = -1;
  bool valid() const { return id >= 0; }
  auto operator<=>(const VarRef&) const = default;
};

struct Term {
  int var = -1;
  double coef = 0.0;
};

/// Affine expression sum(coef * var) + constant.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double constant) : constant_(constant) {}  // NOLINT(implicit)
  LinExpr(VarRef v, double coef = 1.0) { add(v, coef); }  // NOLINT(implicit)

  LinExpr& add(VarRef v, double coef) {
    if (!v.valid()) throw std::invalid_argument("LinExpr: invalid variable");
    if (coef != 0.0) terms_.push_back({v.id, coef});
    return *this;
  }
  LinExpr& add(const LinExpr& e, double scale = 1.0);
  LinExpr& add_constant(double c) {
    constant_ += c;
    return *this;
  }

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }
  double evaluate(std::span<const double> values) const;

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lo = 0.0;
  double hi = kInf;
};

/// lo <= sum(terms) <= hi, with duplicate variables merged.
struct Constraint {
  std::string name;
  std::vector<Term> terms;
  double lo = -kInf;
  double hi = kInf;
};

enum class ObjSense { Minimize, Maximize };

class MilpProblem {
 public:
  VarRef add_continuous(std::string name, double lo, double hi);
  VarRef add_binary(std::string name);
  void set_bounds(VarRef v, double lo, double hi);

  /// Adds lhs (sense) rhs; the constant of lhs moves to the right side.
  int add_constraint(const LinExpr& lhs, RowSense sense, double rhs, std::string name = {});
  /// Adds lo <= expr <= hi.
  int add_range(const LinExpr& expr, double lo, double hi, std::string name = {});

  void set_objective(ObjSense sense, const LinExpr& objective);

  const std::vector<Variable>& variables() const { return vars_; }
  const Variable& variable(VarRef v) const { return vars_.at(static_cast<std::size_t>(v.id)); }
  const std::vector<Constraint>& constraints() const { return rows_; }
  ObjSense sense() const { return sense_; }
  /// Dense objective coefficients, one per variable.
  const std::vector<double>& objective_coefficients() const { return obj_; }
  double objective_constant() const { return obj_const_; }

  std::size_t num_vars() const { return vars_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_binaries() const;

  double evaluate_objective(std::span<const double> values) const;
  /// Largest scaled violation max(0, lo - ax, ax - hi) / (1 + |bound|) over
  /// rows and variable bounds.
  double max_violation(std::span<const double> values) const;
  double max_integrality_violation(std::span<const double> values) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::vector<double> obj_;
  double obj_const_ = 0.0;
  ObjSense sense_ = ObjSense::Minimize;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(SolveStatus s);

struct MilpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;  // incumbent value (problem sense)
  double bound = 0.0;      // proven bound on the optimum (problem sense)
  std::vector<double> values;
  long nodes = 0;
  bool has_solution() const { return !values.empty(); }
  double value(VarRef v) const { return values.at(static_cast<std::size_t>(v.id)); }
};

struct SolveOptions {
  double time_limit_s = kInf;
  double abs_gap = 1e-6;
  double rel_gap = 1e-9;
  std::uint64_t seed = 0;
  long node_limit = 200000;
};

/// Solver contract; implementations must be deterministic for equal inputs.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual MilpSolution solve(const MilpProblem& problem, const SolveOptions& options) const = 0;
  virtual std::string name() const = 0;
};

}  // namespace wildgrid::milp
