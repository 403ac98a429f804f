#include "wildgrid/recourse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wildgrid {

using milp::LinExpr;
using milp::MilpProblem;
using milp::RowSense;
using milp::VarRef;

namespace {

bool is_constant(const LinExpr& e) { return e.terms().empty(); }

std::string at(const std::string& base, std::size_t s, std::size_t y, const std::string& tag) {
  return base + "[s" + std::to_string(s) + ",y" + std::to_string(y) + "]" + tag;
}

}  // namespace

PlanExprs PlanExprs::constant(const CaseData& c, const PlanDecision& plan) {
  const auto L = c.num_lines(), S = c.num_scenarios(), Y = c.num_years(), I = c.num_buses();
  PlanExprs e{Grid2<LinExpr>(L, Y), Grid3<LinExpr>(L, S, Y), Grid3<LinExpr>(L, S, Y), Grid2<LinExpr>(I, Y)};
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t y = 0; y < Y; ++y) {
      e.exists(l, y) = LinExpr(static_cast<double>(plan.line_exists(l, y)));
      for (std::size_t s = 0; s < S; ++s) {
        e.energized(l, s, y) = LinExpr(static_cast<double>(plan.line_energized(l, s, y)));
        e.aux(l, s, y) = LinExpr(plan.aux(l, s, y));
      }
    }
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t y = 0; y < Y; ++y) e.solar(i, y) = LinExpr(plan.solar_capacity(i, y));
  return e;
}

ScoreBlock add_score_block(MilpProblem& p, const CaseData& c, const PlanExprs& plan, std::size_t s, std::size_t y,
                           const std::string& tag) {
  ScoreBlock b;
  LinExpr total;
  const double delta = c.config.delta;
  for (std::size_t l = 0; l < c.num_lines(); ++l) {
    const Line& line = c.lines[l];
    const double psi = line.ignition_score[y][s] + line.ignition_score_deviation[y][s];
    // psi * (I - delta * aux)
    LinExpr threshold;
    threshold.add(plan.energized(l, s, y), psi).add(plan.aux(l, s, y), -psi * delta);
    const std::string name = at("score:" + line.id, s, y, tag);
    VarRef sc;
    if (is_constant(threshold)) {
      sc = p.add_continuous(name, std::max(0.0, threshold.constant()), milp::kInf);
    } else {
      sc = p.add_continuous(name, 0.0, milp::kInf);
      p.add_constraint(LinExpr(sc).add(threshold, -1.0), RowSense::GreaterEqual, 0.0, name + ":min");
    }
    b.score.push_back(sc);
    total.add(sc, 1.0);
  }
  b.budget_row = p.add_constraint(total, RowSense::LessEqual, c.config.risk_tolerance, at("risk", s, y, tag));
  return b;
}

PeriodBlock add_period_block(MilpProblem& p, const CaseData& c, const PlanExprs& plan, std::size_t s, std::size_t y,
                             const std::vector<double>& demand, const std::vector<double>& availability,
                             const std::string& tag) {
  const double hours = c.scenarios[s].hours;
  const double K = c.config.shed_penalty;
  const double M = flow_big_m(c);
  const std::size_t ref = reference_bus(c);
  PeriodBlock b;
  b.s = s;
  b.y = y;
  b.demand = demand;

  std::vector<LinExpr> injection(c.num_buses());

  for (const Generator& g : c.generators) {
    const VarRef pg = p.add_continuous(at("gen:" + g.id, s, y, tag), g.p_min, g.p_max);
    LinExpr sum(pg);
    std::vector<VarRef> segs;
    for (std::size_t z = 0; z < g.segments.size(); ++z) {
      const VarRef seg =
          p.add_continuous(at("seg:" + g.id + ":" + std::to_string(z), s, y, tag), 0.0, g.segments[z].capacity);
      sum.add(seg, -1.0);
      b.cost.add(seg, hours * g.segments[z].slope);
      segs.push_back(seg);
    }
    p.add_constraint(sum, RowSense::Equal, 0.0, at("segsum:" + g.id, s, y, tag));
    injection[g.bus].add(pg, 1.0);
    b.gen.push_back(pg);
    b.segment.push_back(std::move(segs));
  }

  for (std::size_t i = 0; i < c.num_buses(); ++i) {
    const Bus& bus = c.buses[i];
    const std::string bid = std::to_string(bus.id);
    VarRef pr;
    if (bus.solar_candidate) {
      const LinExpr& cap = plan.solar(i, y);
      const std::string name = at("solar:" + bid, s, y, tag);
      if (is_constant(cap)) {
        pr = p.add_continuous(name, 0.0, std::max(0.0, cap.constant() * availability[i]));
      } else {
        pr = p.add_continuous(name, 0.0, milp::kInf);
        p.add_constraint(LinExpr(pr).add(cap, -availability[i]), RowSense::LessEqual, 0.0, name + ":cap");
      }
      injection[i].add(pr, 1.0);
    }
    b.solar.push_back(pr);
    const VarRef served = p.add_continuous(at("served:" + bid, s, y, tag), 0.0, std::max(0.0, demand[i]));
    injection[i].add(served, -1.0);
    b.served.push_back(served);
    b.cost.add(served, -hours * K);
    b.cost.add_constant(hours * K * demand[i]);
    const double lim = i == ref ? 0.0 : std::numbers::pi;
    b.angle.push_back(p.add_continuous(at("angle:" + bid, s, y, tag), -lim, lim));
  }

  for (std::size_t l = 0; l < c.num_lines(); ++l) {
    const Line& line = c.lines[l];
    const LinExpr& on = plan.energized(l, s, y);
    const LinExpr& ex = plan.exists(l, y);
    const std::string name = at("flow:" + line.id, s, y, tag);
    VarRef f;
    if (is_constant(on)) {
      const double cap = line.rating * on.constant();
      f = p.add_continuous(name, -cap, cap);
    } else {
      f = p.add_continuous(name, -line.rating, line.rating);
      p.add_constraint(LinExpr(f).add(on, -line.rating), RowSense::LessEqual, 0.0, name + ":hi");
      p.add_constraint(LinExpr(f).add(on, line.rating), RowSense::GreaterEqual, 0.0, name + ":lo");
    }
    b.flow.push_back(f);
    injection[line.to_bus].add(f, 1.0);
    injection[line.from_bus].add(f, -1.0);

    const double susceptance = c.config.base_mva / line.reactance;
    LinExpr ohm;
    ohm.add(b.angle[line.from_bus], susceptance).add(b.angle[line.to_bus], -susceptance).add(f, -1.0);
    if (is_constant(on) && is_constant(ex)) {
      const double slack = M * (2.0 - on.constant() - ex.constant());
      p.add_range(ohm, -slack, slack, name + ":dc");
    } else {
      LinExpr upper = ohm, lower = ohm;
      upper.add(on, M).add(ex, M);
      lower.add(on, -M).add(ex, -M);
      p.add_constraint(upper, RowSense::LessEqual, 2.0 * M, name + ":dc_hi");
      p.add_constraint(lower, RowSense::GreaterEqual, -2.0 * M, name + ":dc_lo");
    }
  }

  for (std::size_t i = 0; i < c.num_buses(); ++i)
    p.add_constraint(injection[i], RowSense::Equal, 0.0, at("balance:" + std::to_string(c.buses[i].id), s, y, tag));
  return b;
}

std::vector<double> period_demand(const RealizedData& d, std::size_t s, std::size_t y) {
  std::vector<double> out;
  out.reserve(d.demand.size());
  for (const auto& t : d.demand) out.push_back(t[y][s]);
  return out;
}

std::vector<double> period_availability(const RealizedData& d, std::size_t s, std::size_t y) {
  std::vector<double> out;
  out.reserve(d.solar_availability.size());
  for (const auto& t : d.solar_availability) out.push_back(t[y][s]);
  return out;
}

DispatchSolution empty_dispatch(const CaseData& c) {
  const auto G = c.num_generators(), I = c.num_buses(), L = c.num_lines(), S = c.num_scenarios(),
             Y = c.num_years();
  std::size_t Z = 0;
  for (const Generator& g : c.generators) Z = std::max(Z, g.segments.size());
  DispatchSolution d;
  d.gen = Grid3<double>(G, S, Y, 0.0);
  d.gen_segment.assign(Z, Grid3<double>(G, S, Y, 0.0));
  d.solar_dispatch = Grid3<double>(I, S, Y, 0.0);
  d.served = Grid3<double>(I, S, Y, 0.0);
  d.scheduled = Grid3<double>(I, S, Y, 0.0);
  d.flow = Grid3<double>(L, S, Y, 0.0);
  d.angle = Grid3<double>(I, S, Y, 0.0);
  d.score = Grid3<double>(L, S, Y, 0.0);
  return d;
}

void extract_period(const CaseData& c, const PeriodBlock& b, const std::vector<double>& x, DispatchSolution& out) {
  const auto s = b.s, y = b.y;
  auto val = [&](VarRef v) { return v.valid() ? x[static_cast<std::size_t>(v.id)] : 0.0; };
  for (std::size_t g = 0; g < c.num_generators(); ++g) {
    out.gen(g, s, y) = val(b.gen[g]);
    for (std::size_t z = 0; z < b.segment[g].size(); ++z) out.gen_segment[z](g, s, y) = val(b.segment[g][z]);
  }
  for (std::size_t i = 0; i < c.num_buses(); ++i) {
    out.solar_dispatch(i, s, y) = val(b.solar[i]);
    out.served(i, s, y) = val(b.served[i]);
    out.scheduled(i, s, y) = b.demand[i];
    out.angle(i, s, y) = val(b.angle[i]);
  }
  for (std::size_t l = 0; l < c.num_lines(); ++l) out.flow(l, s, y) = val(b.flow[l]);
}

double cost_scale(const CaseData& c) {
  double hours = 1.0;
  for (const Scenario& sc : c.scenarios) hours = std::max(hours, sc.hours);
  return std::max(1.0, c.config.shed_penalty * hours);
}

}  // namespace wildgrid
