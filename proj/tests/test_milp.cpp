#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "wildgrid/milp/branch_and_bound.hpp"
#include "wildgrid/milp/dualize.hpp"
#include "wildgrid/milp/highs_backend.hpp"
#include "wildgrid/milp/linearize.hpp"
#include "wildgrid/milp/lp_writer.hpp"
#include "wildgrid/milp/simplex.hpp"

using namespace wildgrid::milp;

namespace {

bool close(double a, double b, double rel = 1e-7) { return std::abs(a - b) <= rel * (1.0 + std::abs(b)); }

// Vertex enumeration for tiny LPs: every choice of n tight constraints among
// rows and finite bounds, solved by Gaussian elimination.
struct TinyLp {
  int n = 0;
  std::vector<std::vector<double>> a;  // rows
  std::vector<double> rhs;             // a x <= rhs
  std::vector<double> c;               // minimize
};

bool solve_square(std::vector<std::vector<double>> m, std::vector<double> b, std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(m[r][k]) > std::abs(m[p][k])) p = r;
    if (std::abs(m[p][k]) < 1e-10) return false;
    std::swap(m[p], m[k]);
    std::swap(b[p], b[k]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == k) continue;
      const double f = m[r][k] / m[k][k];
      for (std::size_t col = k; col < n; ++col) m[r][col] -= f * m[k][col];
      b[r] -= f * b[k];
    }
  }
  x.resize(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = b[k] / m[k][k];
  return true;
}

// Returns min value, or +inf if infeasible. Feasible region assumed bounded.
double brute_force_lp(const TinyLp& lp) {
  const std::size_t rows = lp.a.size();
  double best = kInf;
  std::vector<int> pick(static_cast<std::size_t>(lp.n));
  const std::size_t limit = std::size_t{1} << rows;
  for (std::size_t mask = 0; mask < limit; ++mask) {
    if (static_cast<int>(__builtin_popcountll(mask)) != lp.n) continue;
    std::vector<std::vector<double>> m;
    std::vector<double> b;
    for (std::size_t r = 0; r < rows; ++r)
      if (mask >> r & 1) {
        m.push_back(lp.a[r]);
        b.push_back(lp.rhs[r]);
      }
    std::vector<double> x;
    if (!solve_square(m, b, x)) continue;
    bool ok = true;
    for (std::size_t r = 0; r < rows && ok; ++r) {
      double s = 0;
      for (int j = 0; j < lp.n; ++j) s += lp.a[r][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
      ok = s <= lp.rhs[r] + 1e-9 * (1 + std::abs(lp.rhs[r]));
    }
    if (!ok) continue;
    double v = 0;
    for (int j = 0; j < lp.n; ++j) v += lp.c[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    best = std::min(best, v);
  }
  return best;
}

MilpProblem random_knapsack(std::mt19937& rng, int n, int m) {
  std::uniform_int_distribution<int> coef(-4, 9), obj(-5, 12);
  MilpProblem p;
  std::vector<VarRef> x;
  for (int j = 0; j < n; ++j) x.push_back(p.add_binary("x" + std::to_string(j)));
  for (int r = 0; r < m; ++r) {
    LinExpr e;
    int sum = 0;
    for (int j = 0; j < n; ++j) {
      const int a = coef(rng);
      e.add(x[static_cast<std::size_t>(j)], a);
      sum += std::max(a, 0);
    }
    p.add_constraint(e, RowSense::LessEqual, std::floor(sum * 0.45) + 0.5);
  }
  LinExpr o;
  for (int j = 0; j < n; ++j) o.add(x[static_cast<std::size_t>(j)], obj(rng));
  p.set_objective(ObjSense::Maximize, o);
  return p;
}

double enumerate_binary(const MilpProblem& p, bool& feasible) {
  const std::size_t n = p.num_vars();
  double best = -kInf;
  feasible = false;
  std::vector<double> x(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    for (std::size_t j = 0; j < n; ++j) x[j] = static_cast<double>(mask >> j & 1);
    if (p.max_violation(x) > 1e-9) continue;
    feasible = true;
    best = std::max(best, p.evaluate_objective(x));
  }
  return best;
}

}  // namespace

TEST_CASE("simplex solves a textbook LP") {
  MilpProblem p;
  const VarRef x = p.add_continuous("x", 0, 4);
  const VarRef y = p.add_continuous("y", 0, kInf);
  p.add_constraint(LinExpr(y, 2.0), RowSense::LessEqual, 12);
  p.add_constraint(LinExpr(x, 3.0).add(y, 2.0), RowSense::LessEqual, 18);
  p.set_objective(ObjSense::Maximize, LinExpr(x, 3.0).add(y, 5.0));
  DenseSimplex lp(p);
  REQUIRE(lp.solve() == LpStatus::Optimal);
  CHECK(lp.objective() == doctest::Approx(36.0));
  CHECK(lp.primal()[0] == doctest::Approx(2.0));
  CHECK(lp.primal()[1] == doctest::Approx(6.0));
}

TEST_CASE("simplex detects infeasible and unbounded LPs") {
  MilpProblem p;
  const VarRef x = p.add_continuous("x", 0, kInf);
  p.add_constraint(LinExpr(x), RowSense::LessEqual, -1);
  p.set_objective(ObjSense::Minimize, LinExpr(x));
  DenseSimplex a(p);
  CHECK(a.solve() == LpStatus::Infeasible);

  MilpProblem q;
  const VarRef u = q.add_continuous("u", -kInf, kInf);
  const VarRef v = q.add_continuous("v", 0, kInf);
  q.add_constraint(LinExpr(u).add(v, -1.0), RowSense::LessEqual, 3);
  q.set_objective(ObjSense::Maximize, LinExpr(v).add(u, 1.0));
  DenseSimplex b(q);
  CHECK(b.solve() == LpStatus::Unbounded);
}

TEST_CASE("simplex matches vertex enumeration on random bounded LPs") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-3, 3), rhs(0.5, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 3, m = 2 + trial % 4;
    TinyLp t;
    t.n = n;
    MilpProblem p;
    std::vector<VarRef> x;
    for (int j = 0; j < n; ++j) {
      const double lo = (trial % 2) ? -2.0 : 0.0;
      x.push_back(p.add_continuous("x" + std::to_string(j), lo, 5));
      std::vector<double> up(static_cast<std::size_t>(n), 0.0), dn(static_cast<std::size_t>(n), 0.0);
      up[static_cast<std::size_t>(j)] = 1;
      dn[static_cast<std::size_t>(j)] = -1;
      t.a.push_back(up);
      t.rhs.push_back(5);
      t.a.push_back(dn);
      t.rhs.push_back(-lo);
    }
    for (int r = 0; r < m; ++r) {
      LinExpr e;
      std::vector<double> row;
      for (int j = 0; j < n; ++j) {
        const double a = std::round(coef(rng) * 4) / 4;
        row.push_back(a);
        e.add(x[static_cast<std::size_t>(j)], a);
      }
      const double b = std::round(rhs(rng) * 4) / 4;
      if (r % 3 == 2) {
        // e >= -b, i.e. -e <= b
        p.add_constraint(e, RowSense::GreaterEqual, -b);
        for (double& a : row) a = -a;
        t.a.push_back(row);
        t.rhs.push_back(b);
      } else {
        p.add_constraint(e, RowSense::LessEqual, b);
        t.a.push_back(row);
        t.rhs.push_back(b);
      }
    }
    LinExpr o;
    for (int j = 0; j < n; ++j) {
      const double cj = std::round(coef(rng) * 4) / 4;
      t.c.push_back(cj);
      o.add(x[static_cast<std::size_t>(j)], cj);
    }
    p.set_objective(ObjSense::Minimize, o);
    const double expect = brute_force_lp(t);
    DenseSimplex lp(p);
    const LpStatus st = lp.solve();
    if (!std::isfinite(expect)) {
      CHECK(st == LpStatus::Infeasible);
    } else {
      REQUIRE(st == LpStatus::Optimal);
      CHECK(close(lp.objective(), expect, 1e-8));
      CHECK(p.max_violation(lp.primal()) <= 1e-9);
    }
  }
}

TEST_CASE("branch and bound: pure LP equals the simplex optimum") {
  MilpProblem p;
  const VarRef x = p.add_continuous("x", 0, 4);
  const VarRef y = p.add_continuous("y", 0, kInf);
  p.add_constraint(LinExpr(y, 2.0), RowSense::LessEqual, 12);
  p.add_constraint(LinExpr(x, 3.0).add(y, 2.0), RowSense::LessEqual, 18);
  p.set_objective(ObjSense::Maximize, LinExpr(x, 3.0).add(y, 5.0));
  const MilpSolution s = solve_branch_and_bound(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(36.0));
  CHECK(s.nodes == 1);
}

TEST_CASE("branch and bound: two-item knapsack") {
  MilpProblem p;
  const VarRef x = p.add_binary("x");
  const VarRef y = p.add_binary("y");
  p.add_constraint(LinExpr(x).add(y, 1.0), RowSense::LessEqual, 1);
  p.set_objective(ObjSense::Maximize, LinExpr(x, 3.0).add(y, 2.0));
  const MilpSolution s = solve_branch_and_bound(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == 3.0);
  CHECK(s.value(x) == 1.0);
  CHECK(s.value(y) == 0.0);
}

TEST_CASE("branch and bound matches 2^8 enumeration") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const MilpProblem p = random_knapsack(rng, 8, 1 + trial % 4);
    bool feasible = false;
    const double expect = enumerate_binary(p, feasible);
    const MilpSolution s = solve_branch_and_bound(p);
    if (!feasible) {
      CHECK(s.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(expect).epsilon(1e-9));
    CHECK(p.max_violation(s.values) <= 1e-6);
    CHECK(p.max_integrality_violation(s.values) <= 1e-6);
  }
}

TEST_CASE("branch and bound is deterministic") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const MilpProblem p = random_knapsack(rng, 10, 3);
    const MilpSolution a = solve_branch_and_bound(p), b = solve_branch_and_bound(p);
    CHECK(a.values == b.values);
    CHECK(a.objective == b.objective);
  }
}

TEST_CASE("branch and bound reports infeasibility and node limits") {
  MilpProblem p;
  const VarRef x = p.add_binary("x");
  const VarRef y = p.add_binary("y");
  p.add_constraint(LinExpr(x).add(y, 1.0), RowSense::Equal, 1.5);
  p.set_objective(ObjSense::Minimize, LinExpr(x));
  CHECK(solve_branch_and_bound(p).status == SolveStatus::Infeasible);

  std::mt19937 rng(5);
  const MilpProblem big = random_knapsack(rng, 14, 3);
  SolveOptions o;
  o.node_limit = 2;
  const MilpSolution s = solve_branch_and_bound(big, o);
  CHECK((s.status == SolveStatus::IterationLimit || s.status == SolveStatus::Optimal));
}

TEST_CASE("problem rejects malformed input") {
  MilpProblem p;
  CHECK_THROWS_AS(p.add_continuous("x", 2, 1), std::invalid_argument);
  const VarRef b = p.add_binary("b");
  CHECK_THROWS_AS(p.set_bounds(b, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(p.add_constraint(LinExpr(VarRef{5}), RowSense::LessEqual, 1), std::invalid_argument);
  CHECK_THROWS_AS(p.add_constraint(LinExpr(b, std::nan("")), RowSense::LessEqual, 1), std::invalid_argument);
}

TEST_CASE("binary product gadget truth table") {
  for (int xv = 0; xv <= 1; ++xv)
    for (int yv = 0; yv <= 1; ++yv) {
      for (ObjSense sense : {ObjSense::Minimize, ObjSense::Maximize}) {
        MilpProblem p;
        const VarRef x = p.add_binary("x");
        const VarRef y = p.add_binary("y");
        const VarRef w = linearize_product_bb(p, x, y);
        p.set_bounds(x, xv, xv);
        p.set_bounds(y, yv, yv);
        p.set_objective(sense, LinExpr(w));
        const MilpSolution s = solve_branch_and_bound(p);
        REQUIRE(s.status == SolveStatus::Optimal);
        CHECK(s.value(w) == doctest::Approx(xv * yv).epsilon(1e-12));
      }
    }
  MilpProblem p;
  const VarRef x = p.add_binary("x");
  const VarRef c = p.add_continuous("c", 0, 1);
  CHECK_THROWS_AS(linearize_product_bb(p, x, c), std::invalid_argument);
}

TEST_CASE("binary-continuous product gadget") {
  SUBCASE("pass-through and blocked cases") {
    for (int v = 0; v <= 1; ++v) {
      MilpProblem p;
      const VarRef flag = p.add_binary("v");
      const VarRef mu = p.add_continuous("mu", 0, 100);
      const auto prod = linearize_product_bc(p, flag, mu, 100);
      p.set_bounds(flag, v, v);
      p.set_bounds(mu, 7.5, 7.5);
      p.set_objective(ObjSense::Maximize, LinExpr(prod.nu));
      const MilpSolution s = solve_branch_and_bound(p);
      REQUIRE(s.status == SolveStatus::Optimal);
      CHECK(s.value(prod.nu) == doctest::Approx(v ? 7.5 : 0.0));
      CHECK(s.value(prod.omega) == doctest::Approx(v ? 0.0 : 7.5));
    }
  }
  SUBCASE("random samples") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> mu_dist(0, 50);
    for (int k = 0; k < 200; ++k) {
      const int v = static_cast<int>(rng() % 2);
      const double muv = mu_dist(rng);
      for (ObjSense sense : {ObjSense::Minimize, ObjSense::Maximize}) {
        MilpProblem p;
        const VarRef flag = p.add_binary("v");
        const VarRef mu = p.add_continuous("mu", 0, 50);
        const auto prod = linearize_product_bc(p, flag, mu);
        p.set_bounds(flag, v, v);
        p.set_bounds(mu, muv, muv);
        p.set_objective(sense, LinExpr(prod.nu));
        const MilpSolution s = solve_branch_and_bound(p);
        REQUIRE(s.status == SolveStatus::Optimal);
        CHECK(std::abs(s.value(prod.nu) - v * muv) <= 1e-9);
      }
    }
  }
  SUBCASE("unbounded mu is rejected") {
    MilpProblem p;
    const VarRef flag = p.add_binary("v");
    const VarRef mu = p.add_continuous("mu", 0, kInf);
    CHECK_THROWS_AS(linearize_product_bc(p, flag, mu), std::invalid_argument);
  }
}

TEST_CASE("LP dual value equals primal value") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> coef(-2, 3), cost(0.1, 4);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    MilpProblem p;
    std::vector<VarRef> x;
    for (int j = 0; j < 4; ++j) x.push_back(p.add_continuous("x" + std::to_string(j), trial % 2 ? -1.0 : 0.0, 3 + j));
    for (int r = 0; r < 3; ++r) {
      LinExpr e;
      for (int j = 0; j < 4; ++j) e.add(x[static_cast<std::size_t>(j)], coef(rng));
      if (r == 0)
        p.add_constraint(e, RowSense::GreaterEqual, 1.0);
      else if (r == 1)
        p.add_range(e, -2.0, 4.0);
      else
        p.add_constraint(e, RowSense::Equal, 0.5);
    }
    LinExpr o(2.5);
    for (int j = 0; j < 4; ++j) o.add(x[static_cast<std::size_t>(j)], cost(rng) - 1.0);
    p.set_objective(ObjSense::Minimize, o);
    DenseSimplex primal(p);
    if (primal.solve() != LpStatus::Optimal) continue;

    MilpProblem d;
    DualizeOptions opt;
    opt.objective_scale = 2.0;
    const DualBlock block = append_dual(d, p, opt);
    d.set_objective(ObjSense::Maximize, block.objective);
    DenseSimplex dual(d);
    REQUIRE(dual.solve() == LpStatus::Optimal);
    CHECK(close(dual.objective() * 2.0, primal.objective(), 1e-8));
    ++compared;
  }
  CHECK(compared > 20);
}

TEST_CASE("dual with a flag-shifted upper bound") {
  // min -x, x <= 2 + 3*flag  ->  value -2 or -5.
  for (int f = 0; f <= 1; ++f) {
    MilpProblem p;
    const VarRef x = p.add_continuous("x", 0, 2);
    p.set_objective(ObjSense::Minimize, LinExpr(x, -1.0));
    MilpProblem d;
    const VarRef flag = d.add_binary("flag");
    DualizeOptions opt;
    opt.shifts.push_back({x.id, flag, 3.0});
    opt.shifted_dual_cap = 10.0;
    const DualBlock block = append_dual(d, p, opt);
    d.set_bounds(flag, f, f);
    d.set_objective(ObjSense::Maximize, block.objective);
    const MilpSolution s = solve_branch_and_bound(d);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(f ? -5.0 : -2.0));
  }
}

TEST_CASE("LP writer emits every section") {
  MilpProblem p;
  const VarRef x = p.add_binary("x:1");
  const VarRef y = p.add_continuous("y", -kInf, kInf);
  const VarRef z = p.add_continuous("1z", 0, 4);
  p.add_range(LinExpr(x).add(y, 2.0), -1, 3, "band");
  p.add_constraint(LinExpr(y).add(z, -1.0), RowSense::Equal, 0, "tie");
  p.set_objective(ObjSense::Minimize, LinExpr(x, 1.0).add(z, -2.0).add_constant(4));
  std::ostringstream out;
  write_lp(out, p, "demo");
  const std::string s = out.str();
  CHECK(s.find("Minimize") != std::string::npos);
  CHECK(s.find("band_lo:") != std::string::npos);
  CHECK(s.find("band_hi:") != std::string::npos);
  CHECK(s.find("tie:") != std::string::npos);
  CHECK(s.find("x_1") != std::string::npos);
  CHECK(s.find(" y free") != std::string::npos);
  CHECK(s.find("Binaries") != std::string::npos);
  CHECK(s.find("End") != std::string::npos);
}

TEST_CASE("backends agree on random MILPs") {
  if (!HighsBackend::available()) {
    MESSAGE("HiGHS not loadable; skipping cross-check");
    return;
  }
  HighsBackend highs;
  BranchAndBound bundled;
  std::mt19937 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    MilpProblem p = random_knapsack(rng, 9, 1 + trial % 3);
    const VarRef c = p.add_continuous("slack", 0, 3);
    p.add_constraint(LinExpr(c).add(VarRef{0}, -2.0), RowSense::LessEqual, 0.5);
    LinExpr o;
    for (std::size_t j = 0; j < p.num_vars(); ++j) o.add(VarRef{static_cast<int>(j)}, p.objective_coefficients()[j]);
    o.add(c, 1.5);
    p.set_objective(ObjSense::Maximize, o);
    const MilpSolution a = bundled.solve(p, {}), b = highs.solve(p, {});
    REQUIRE(a.status == b.status);
    if (a.status == SolveStatus::Optimal) CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
  }
}

TEST_CASE("make_backend selects by name") {
  CHECK(make_backend("bundled")->name() == "bundled");
  const std::string auto_name = make_backend("auto")->name();
  CHECK((auto_name == "bundled" || auto_name == "highs"));
  CHECK_THROWS_AS(make_backend("cplex"), std::invalid_argument);
}
