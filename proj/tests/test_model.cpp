#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "wildgrid/ingest.hpp"
#include "wildgrid/model.hpp"

using namespace wildgrid;

namespace {

Generator quad(double b, double c, double p_max) {
  Generator g;
  g.id = "G";
  g.p_max = p_max;
  g.cost = {0.0, b, c};
  return g;
}

bool has_violation(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

CaseData six_bus() { return load_case(WILDGRID_CASES_DIR "/6bus.json").data; }

}  // namespace

TEST_CASE("segments: one segment takes the midpoint marginal cost") {
  const auto segs = piecewise_linearize_cost(quad(40.0, 0.001, 100.0), 1);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].capacity == doctest::Approx(100.0));
  CHECK(segs[0].slope == doctest::Approx(40.1).epsilon(1e-12));
}

TEST_CASE("segments: two segments of a 220 MW unit") {
  const auto segs = piecewise_linearize_cost(quad(13.5, 0.00045, 220.0), 2);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].slope == doctest::Approx(13.5495).epsilon(1e-12));
  CHECK(segs[1].slope == doctest::Approx(13.6485).epsilon(1e-12));
  CHECK(segs[0].capacity == doctest::Approx(110.0));
  CHECK(segs[1].capacity == doctest::Approx(110.0));
}

TEST_CASE("segments: linear cost gives equal slopes") {
  for (const auto& s : piecewise_linearize_cost(quad(17.7, 0.0, 40.0), 3)) CHECK(s.slope == doctest::Approx(17.7));
}

TEST_CASE("segments: bad inputs are rejected") {
  CHECK_THROWS_AS(piecewise_linearize_cost(quad(10.0, 0.01, 50.0), 0), ConfigError);
  CHECK_THROWS_AS(piecewise_linearize_cost(quad(10.0, -0.01, 50.0), 2), ConfigError);
}

TEST_CASE("segments: greedy fill stays within the secant error of the quadratic") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Generator g = quad(5.0 + 40.0 * u(rng), 0.05 * u(rng), 20.0 + 200.0 * u(rng));
    const int Z = 1 + static_cast<int>(u(rng) * 5);
    const auto segs = piecewise_linearize_cost(g, Z);
    for (std::size_t z = 1; z < segs.size(); ++z) CHECK(segs[z].slope >= segs[z - 1].slope);
    const double width = g.p_max / Z;
    const double P = g.p_max * u(rng);
    double left = P, cost = 0.0;
    for (const auto& s : segs) {
      const double take = std::min(left, s.capacity);
      cost += take * s.slope;
      left -= take;
    }
    const double exact = g.cost.b * P + g.cost.c * P * P;
    CHECK(std::abs(cost - exact) <= g.cost.c * width * width / 4.0 + 1e-9);
  }
}

TEST_CASE("realization: nominal vertex leaves the data unchanged") {
  const CaseData c = six_bus();
  const RealizedData d = apply_realization(c, UncertaintyRealization::nominal(c));
  for (std::size_t i = 0; i < c.num_buses(); ++i) {
    CHECK(d.demand[i] == c.buses[i].nominal_demand);
    CHECK(d.solar_availability[i] == c.buses[i].solar_availability);
  }
}

TEST_CASE("realization: one demand-up flag moves one entry") {
  std::mt19937_64 rng(3);
  CaseData c = testing::random_case(rng);
  c.buses[1].nominal_demand[0][0] = 100.0;
  c.buses[1].demand_deviation[0][0] = 10.0;
  UncertaintyRealization r = UncertaintyRealization::nominal(c);
  r.u_demand(1, 0, 0) = 1;
  const RealizedData d = apply_realization(c, r);
  CHECK(d.demand[1][0][0] == doctest::Approx(110.0));
  for (std::size_t i = 0; i < c.num_buses(); ++i)
    for (std::size_t y = 0; y < c.num_years(); ++y)
      for (std::size_t s = 0; s < c.num_scenarios(); ++s)
        if (i != 1 || y != 0 || s != 0) CHECK(d.demand[i][y][s] == c.buses[i].nominal_demand[y][s]);
}

TEST_CASE("realization: availability is clipped to one") {
  std::mt19937_64 rng(4);
  CaseData c = testing::random_case(rng);
  c.buses[1].solar_candidate = true;
  c.buses[1].solar_availability[0][0] = 0.95;
  c.buses[1].solar_availability_deviation[0][0] = 0.10;
  UncertaintyRealization r = UncertaintyRealization::nominal(c);
  r.u_solar(1, 0, 0) = 1;
  CHECK(apply_realization(c, r).solar_availability[1][0][0] == 1.0);
  const auto dev = solar_deviation(c, 1, 0, 0);
  CHECK(dev.up == doctest::Approx(0.05));
  CHECK(dev.down == doctest::Approx(0.10));
}

TEST_CASE("realization: swapping u and v undoes an unclipped realization") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    CaseData c = testing::random_case(rng, {3, 2, 2, 3});
    const UncertaintyRealization r = testing::random_realization(c, rng, 3);
    const RealizedData d = apply_realization(c, r);
    bool clipped = false;
    CaseData moved = c;
    for (std::size_t i = 0; i < c.num_buses(); ++i) {
      moved.buses[i].nominal_demand = d.demand[i];
      moved.buses[i].solar_availability = d.solar_availability[i];
      for (std::size_t y = 0; y < c.num_years(); ++y)
        for (std::size_t s = 0; s < c.num_scenarios(); ++s) {
          const auto& b = c.buses[i];
          const double k = b.solar_availability[y][s], dk = b.solar_availability_deviation[y][s];
          if (k + dk > 1.0 || k - dk < 0.0 || b.nominal_demand[y][s] < b.demand_deviation[y][s]) clipped = true;
        }
    }
    if (clipped) continue;
    const UncertaintyRealization swapped{r.v_demand, r.u_demand, r.v_solar, r.u_solar};
    const RealizedData back = apply_realization(moved, swapped);
    for (std::size_t i = 0; i < c.num_buses(); ++i)
      for (std::size_t y = 0; y < c.num_years(); ++y)
        for (std::size_t s = 0; s < c.num_scenarios(); ++s) {
          CHECK(back.demand[i][y][s] == doctest::Approx(c.buses[i].nominal_demand[y][s]).epsilon(1e-12));
          CHECK(back.solar_availability[i][y][s] ==
                doctest::Approx(c.buses[i].solar_availability[y][s]).epsilon(1e-12));
        }
  }
}

TEST_CASE("realization: key order and budget accounting") {
  std::mt19937_64 rng(6);
  const CaseData c = testing::random_case(rng);
  UncertaintyRealization r = UncertaintyRealization::nominal(c);
  CHECK(r.is_nominal());
  r.v_solar(0, 0, 0) = 1;
  CHECK(r.budget_used() == 0);
  r.u_demand(1, 0, 0) = 1;
  CHECK(r.budget_used() == 1);
  const auto k = r.key();
  CHECK(k.size() == 4 * c.num_buses() * c.num_scenarios() * c.num_years());
  CHECK(k[3] == 1);
  CHECK(check_realization(c, r).empty());
  r.v_demand(1, 0, 0) = 1;
  CHECK(has_violation(check_realization(c, r), "u + v"));
}

TEST_CASE("validation: bundled 6-bus case is valid") { CHECK(validate_case(six_bus()).empty()); }

TEST_CASE("validation: scenario hours must sum to a year") {
  CaseData c = six_bus();
  c.scenarios[0].hours = 8000.0;
  c.scenarios[1].hours = 800.0;
  CHECK(has_violation(validate_case(c), "8760"));
}

TEST_CASE("validation: zero reactance is reported and every violation is listed") {
  CaseData c = six_bus();
  c.lines[2].reactance = 0.0;
  c.lines[3].rating = -1.0;
  const auto v = validate_case(c);
  CHECK(has_violation(v, "reactance > 0"));
  CHECK(has_violation(v, "rating > 0"));
}

TEST_CASE("validation: scores outside [0,1) and nonconvex costs") {
  CaseData c = six_bus();
  c.lines[0].ignition_score[0][0] = 1.0;
  c.generators[0].cost.c = -1.0;
  const auto v = validate_case(c);
  CHECK(has_violation(v, "score in [0,1)"));
  CHECK(has_violation(v, "convex"));
}

TEST_CASE("plan checks: structural invariants") {
  std::mt19937_64 rng(8);
  const CaseData c = testing::random_case(rng);
  PlanDecision p = testing::random_plan(c, rng);
  CHECK(check_plan(c, p).empty());
  const std::size_t cand = c.num_lines() - 1;
  p.line_exists(cand, 0) = 0;
  p.line_energized(cand, 0, 0) = 1;
  p.aux(cand, 0, 0) = p.line_modified(cand, 0);
  CHECK(has_violation(check_plan(c, p), "energized only if present"));
  PlanDecision q = testing::status_quo_plan(c);
  q.line_exists(0, 0) = 0;
  q.line_energized(0, 0, 0) = 0;
  CHECK(has_violation(check_plan(c, q), "existing lines stay present"));
}

TEST_CASE("investment: only increments are charged") {
  std::mt19937_64 rng(9);
  CaseData c = testing::random_case(rng, {2, 1, 2, 1});
  c.config.years = 2;
  for (auto& b : c.buses) {
    b.nominal_demand.resize(2, b.nominal_demand[0]);
    b.demand_deviation.resize(2, b.demand_deviation[0]);
    b.solar_availability.resize(2, b.solar_availability[0]);
    b.solar_availability_deviation.resize(2, b.solar_availability_deviation[0]);
  }
  for (auto& l : c.lines) {
    l.install_cost.assign(2, l.existing ? 0.0 : 100.0);
    l.modify_cost.assign(2, 10.0);
    l.ignition_score.resize(2, l.ignition_score[0]);
    l.ignition_score_deviation.resize(2, l.ignition_score_deviation[0]);
  }
  c.config.solar_cost = {3.0, 5.0};
  c.buses[1].solar_candidate = true;
  PlanDecision p = testing::status_quo_plan(c);
  const std::size_t cand = c.num_lines() - 1;
  p.line_exists(cand, 1) = 1;
  p.line_modified(0, 0) = p.line_modified(0, 1) = 1;
  p.solar_capacity(1, 0) = 2.0;
  p.solar_capacity(1, 1) = 7.0;
  const InvestmentCost inv = investment_cost(c, p);
  CHECK(inv.lines[0] == 0.0);
  CHECK(inv.lines[1] == 100.0);
  CHECK(inv.modification[0] == 10.0);
  CHECK(inv.modification[1] == 0.0);
  CHECK(inv.solar[0] == 6.0);
  CHECK(inv.solar[1] == 25.0);
  CHECK(inv.total() == 141.0);
}

TEST_CASE("score threshold: modification halves the score") {
  const CaseData c = six_bus();
  CHECK(c.lines[0].ignition_score[0][1] == doctest::Approx(0.6330));
  CHECK(score_threshold(c, 0, 1, 0, false) == doctest::Approx(0.6330));
  CHECK(score_threshold(c, 0, 1, 0, true) == doctest::Approx(0.31650));
}

TEST_CASE("reference bus and big-M") {
  const CaseData c = six_bus();
  CHECK(c.buses[reference_bus(c)].id == 1);
  // max rating 200, largest susceptance base/x = 100/0.1
  CHECK(flow_big_m(c) == doctest::Approx(10.0 * (200.0 + 1000.0 * std::numbers::pi)));
  CaseData d = c;
  d.config.big_m = 5e4;
  CHECK(flow_big_m(d) == 5e4);
}
