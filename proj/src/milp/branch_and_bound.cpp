#include "wildgrid/milp/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "wildgrid/milp/simplex.hpp"

namespace wildgrid::milp {

namespace {

constexpr double kIntTol = 1e-6;

struct Node {
  double bound;  // minimization form
  long id;
  std::vector<std::pair<int, std::int8_t>> fixings;
  std::shared_ptr<const LpBasis> basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

class Search {
 public:
  Search(const MilpProblem& p, const SolveOptions& o)
      : p_(p), opt_(o), lp_(p), sign_(p.sense() == ObjSense::Maximize ? -1.0 : 1.0) {
    for (std::size_t j = 0; j < p.num_vars(); ++j)
      if (p.variables()[j].kind == VarKind::Binary) binaries_.push_back(static_cast<int>(j));
    start_ = std::chrono::steady_clock::now();
  }

  MilpSolution run();

 private:
  LpStatus solve_with(const std::vector<std::pair<int, std::int8_t>>& fix, const LpBasis* warm) {
    lp_.reset_bounds();
    for (auto [j, v] : fix) lp_.set_bounds(j, v, v);
    return lp_.solve(warm);
  }
  double min_value() const { return sign_ * lp_.objective(); }
  int branching_var(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = kIntTol;
    for (int j : binaries_) {
      const double f = std::abs(x[static_cast<std::size_t>(j)] - std::round(x[static_cast<std::size_t>(j)]));
      if (f > best_frac + 1e-12) {
        best_frac = f;
        best = j;
      }
    }
    return best;
  }
  void offer(std::vector<double> x) {
    std::vector<double> rounded = x;
    for (int j : binaries_) rounded[static_cast<std::size_t>(j)] = std::round(x[static_cast<std::size_t>(j)]);
    if (p_.max_violation(rounded) <= 1e-6)
      x = std::move(rounded);
    else if (p_.max_violation(x) > 1e-6)
      return;
    const double v = sign_ * p_.evaluate_objective(x);
    if (!has_incumbent_ || v < incumbent_ - 1e-12) {
      incumbent_ = v;
      best_ = std::move(x);
      has_incumbent_ = true;
    }
  }
  bool prunable(double bound) const {
    if (!has_incumbent_) return false;
    const double gap = std::max(opt_.abs_gap, opt_.rel_gap * std::abs(incumbent_));
    return bound >= incumbent_ - gap;
  }
  bool out_of_time() const {
    if (!std::isfinite(opt_.time_limit_s)) return false;
    const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start_;
    return el.count() > opt_.time_limit_s;
  }
  // Fixes fractional binaries to their nearest value one at a time.
  void dive(std::vector<std::pair<int, std::int8_t>> fix, std::vector<double> x, const LpBasis& basis) {
    LpBasis warm = basis;
    for (std::size_t step = 0; step <= binaries_.size(); ++step) {
      const int j = branching_var(x);
      if (j < 0) {
        offer(std::move(x));
        return;
      }
      fix.emplace_back(j, static_cast<std::int8_t>(x[static_cast<std::size_t>(j)] >= 0.5 ? 1 : 0));
      if (solve_with(fix, &warm) != LpStatus::Optimal) return;
      if (prunable(min_value())) return;
      x = lp_.primal();
      warm = lp_.basis();
    }
  }

  const MilpProblem& p_;
  SolveOptions opt_;
  DenseSimplex lp_;
  double sign_;
  std::vector<int> binaries_;
  std::chrono::steady_clock::time_point start_;
  bool has_incumbent_ = false;
  double incumbent_ = kInf;
  std::vector<double> best_;
};

MilpSolution Search::run() {
  MilpSolution out;
  const LpStatus root = solve_with({}, nullptr);
  if (root == LpStatus::Infeasible) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  if (root == LpStatus::Unbounded) {
    out.status = SolveStatus::Unbounded;
    return out;
  }
  if (root == LpStatus::IterationLimit) {
    out.status = SolveStatus::IterationLimit;
    return out;
  }
  const double root_bound = min_value();
  std::vector<double> x = lp_.primal();
  auto root_basis = std::make_shared<const LpBasis>(lp_.basis());
  if (branching_var(x) < 0) {
    offer(x);
  } else {
    dive({}, x, *root_basis);
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  if (branching_var(x) >= 0) open.push(Node{root_bound, next_id++, {}, root_basis});
  long nodes = 1;
  bool limited = false;
  double global_bound = root_bound;

  while (!open.empty()) {
    Node node = open.top();
    global_bound = node.bound;
    if (prunable(node.bound)) break;  // best-first: every remaining node is worse
    open.pop();
    if (nodes >= opt_.node_limit || out_of_time()) {
      limited = true;
      open.push(std::move(node));
      break;
    }
    ++nodes;
    const LpStatus st = solve_with(node.fixings, node.basis.get());
    if (st == LpStatus::Infeasible) continue;
    if (st != LpStatus::Optimal) {
      limited = true;
      continue;
    }
    const double bound = std::max(node.bound, min_value());
    if (prunable(bound)) continue;
    std::vector<double> xs = lp_.primal();
    const int branch = branching_var(xs);
    if (branch < 0) {
      offer(std::move(xs));
      continue;
    }
    auto basis = std::make_shared<const LpBasis>(lp_.basis());
    if (nodes % 64 == 0) dive(node.fixings, xs, *basis);
    for (std::int8_t val : {std::int8_t{0}, std::int8_t{1}}) {
      Node child{bound, next_id++, node.fixings, basis};
      child.fixings.emplace_back(branch, val);
      open.push(std::move(child));
    }
  }

  out.nodes = nodes;
  if (!has_incumbent_) {
    out.status = limited ? SolveStatus::IterationLimit : SolveStatus::Infeasible;
    return out;
  }
  const double bound_min = open.empty() ? incumbent_ : std::min(incumbent_, global_bound);
  out.status = limited ? SolveStatus::IterationLimit : SolveStatus::Optimal;
  out.values = std::move(best_);
  out.objective = p_.evaluate_objective(out.values);
  out.bound = sign_ * bound_min;
  return out;
}

}  // namespace

MilpSolution solve_branch_and_bound(const MilpProblem& problem, const SolveOptions& options) {
  Search s(problem, options);
  return s.run();
}

}  // namespace wildgrid::milp
