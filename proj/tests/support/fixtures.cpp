#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wildgrid::testing {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

YearScenarioTable table(std::mt19937_64& rng, std::size_t Y, std::size_t S, double lo, double hi) {
  YearScenarioTable t(Y, std::vector<double>(S));
  for (auto& row : t)
    for (double& v : row) v = uniform(rng, lo, hi);
  return t;
}

}  // namespace

CaseData random_case(std::mt19937_64& rng, const RandomCaseShape& shape) {
  CaseData c;
  const int I = pick(rng, 2, std::max(2, shape.max_buses));
  const int S = pick(rng, 1, std::max(1, shape.max_scenarios));
  const int Y = pick(rng, 1, std::max(1, shape.max_years));
  auto& cfg = c.config;
  cfg.years = Y;
  cfg.uncertainty_budget = shape.budget;
  cfg.shed_penalty = 1000.0;
  cfg.delta = 0.5;
  cfg.segments = pick(rng, 1, 3);
  cfg.epsilon = 1e-6;
  cfg.max_iterations = 30;
  for (int y = 0; y < Y; ++y) cfg.solar_cost.push_back(uniform(rng, 5e4, 4e5));

  double left = 8760.0;
  for (int s = 0; s < S; ++s) {
    const double h = s + 1 == S ? left : std::round(uniform(rng, 2000.0, 6000.0));
    c.scenarios.push_back({"s" + std::to_string(s), h});
    left -= h;
  }

  const auto Yz = static_cast<std::size_t>(Y), Sz = static_cast<std::size_t>(S);
  for (int i = 0; i < I; ++i) {
    Bus b;
    b.id = i + 1;
    b.solar_candidate = i > 0 && uniform(rng, 0, 1) < 0.7;
    b.nominal_demand = i == 0 && uniform(rng, 0, 1) < 0.5 ? table(rng, Yz, Sz, 0.0, 0.0) : table(rng, Yz, Sz, 5.0, 60.0);
    b.demand_deviation = table(rng, Yz, Sz, 0.0, 0.0);
    for (std::size_t y = 0; y < Yz; ++y)
      for (std::size_t s = 0; s < Sz; ++s) b.demand_deviation[y][s] = b.nominal_demand[y][s] * uniform(rng, 0.05, 0.3);
    b.solar_availability = b.solar_candidate ? table(rng, Yz, Sz, 0.3, 0.95) : table(rng, Yz, Sz, 0.0, 0.0);
    b.solar_availability_deviation =
        b.solar_candidate ? table(rng, Yz, Sz, 0.02, 0.2) : table(rng, Yz, Sz, 0.0, 0.0);
    c.buses.push_back(std::move(b));
  }

  const int G = pick(rng, 1, 2);
  for (int g = 0; g < G; ++g) {
    Generator gen;
    gen.id = "G" + std::to_string(g + 1);
    gen.bus = g == 0 ? 0 : static_cast<std::size_t>(pick(rng, 0, I - 1));
    gen.p_max = uniform(rng, 40.0, 120.0);
    gen.cost = {0.0, uniform(rng, 10.0, 50.0), uniform(rng, 0.0, 0.05)};
    gen.segments = piecewise_linearize_cost(gen, cfg.segments);
    c.generators.push_back(std::move(gen));
  }

  auto add_line = [&](std::size_t from, std::size_t to, bool existing) {
    Line l;
    l.id = "L" + std::to_string(c.lines.size() + 1);
    l.from_bus = from;
    l.to_bus = to;
    l.reactance = uniform(rng, 0.1, 0.4);
    l.rating = uniform(rng, 30.0, 80.0);
    l.existing = existing;
    l.install_cost.assign(Yz, existing ? 0.0 : uniform(rng, 1e5, 2e6));
    l.modify_cost.assign(Yz, uniform(rng, 1e5, 2e6));
    l.ignition_score = table(rng, Yz, Sz, 0.0, 0.9);
    l.ignition_score_deviation = table(rng, Yz, Sz, 0.0, 0.05);
    c.lines.push_back(std::move(l));
  };
  for (int i = 1; i < I; ++i) add_line(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(i), true);
  add_line(0, static_cast<std::size_t>(I - 1), false);

  cfg.risk_tolerance = uniform(rng, 0.3, 1.5);
  return c;
}

PlanDecision random_plan(const CaseData& c, std::mt19937_64& rng) {
  PlanDecision p = PlanDecision::empty(c);
  const auto L = c.num_lines(), S = c.num_scenarios(), Y = c.num_years();
  for (std::size_t l = 0; l < L; ++l) {
    int ex = c.lines[l].existing ? 1 : 0, mod = 0;
    for (std::size_t y = 0; y < Y; ++y) {
      if (!ex && uniform(rng, 0, 1) < 0.5) ex = 1;
      if (!mod && uniform(rng, 0, 1) < 0.3) mod = 1;
      p.line_exists(l, y) = ex;
      p.line_modified(l, y) = mod;
      for (std::size_t s = 0; s < S; ++s) {
        const int on = ex && uniform(rng, 0, 1) < 0.75 ? 1 : 0;
        p.line_energized(l, s, y) = on;
        p.aux(l, s, y) = on * mod;
      }
    }
  }
  for (std::size_t i = 0; i < c.num_buses(); ++i) {
    if (!c.buses[i].solar_candidate) continue;
    double cap = 0.0;
    for (std::size_t y = 0; y < Y; ++y) {
      if (uniform(rng, 0, 1) < 0.5) cap += uniform(rng, 0.0, 40.0);
      p.solar_capacity(i, y) = cap;
    }
  }
  return p;
}

PlanDecision risk_feasible_plan(const CaseData& c, std::mt19937_64& rng) {
  PlanDecision p = random_plan(c, rng);
  for (std::size_t s = 0; s < c.num_scenarios(); ++s)
    for (std::size_t y = 0; y < c.num_years(); ++y)
      for (;;) {
        double total = 0.0, worst = -1.0;
        std::size_t at = 0;
        for (std::size_t l = 0; l < c.num_lines(); ++l) {
          if (!p.line_energized(l, s, y)) continue;
          const double sc = score_threshold(c, l, s, y, p.line_modified(l, y) == 1);
          total += sc;
          if (sc > worst) worst = sc, at = l;
        }
        if (total <= c.config.risk_tolerance) break;
        p.line_energized(at, s, y) = 0;
        p.aux(at, s, y) = 0.0;
      }
  return p;
}

UncertaintyRealization random_realization(const CaseData& c, std::mt19937_64& rng, int budget) {
  UncertaintyRealization r = UncertaintyRealization::nominal(c);
  int used = 0;
  for (std::size_t i = 0; i < c.num_buses(); ++i)
    for (std::size_t s = 0; s < c.num_scenarios(); ++s)
      for (std::size_t y = 0; y < c.num_years(); ++y) {
        for (int channel = 0; channel < 2; ++channel) {
          auto& u = channel == 0 ? r.u_demand : r.u_solar;
          auto& v = channel == 0 ? r.v_demand : r.v_solar;
          const double roll = uniform(rng, 0, 1);
          if (roll < 0.25 && used < budget) {
            u(i, s, y) = 1;
            ++used;
          } else if (roll > 0.7) {
            v(i, s, y) = 1;
          }
        }
      }
  return r;
}

PlanDecision status_quo_plan(const CaseData& c) {
  PlanDecision p = PlanDecision::empty(c);
  for (std::size_t l = 0; l < c.num_lines(); ++l)
    for (std::size_t y = 0; y < c.num_years(); ++y) {
      const int ex = c.lines[l].existing ? 1 : 0;
      p.line_exists(l, y) = ex;
      for (std::size_t s = 0; s < c.num_scenarios(); ++s) p.line_energized(l, s, y) = ex;
    }
  return p;
}

CaseData tiny_case(int budget) {
  CaseData c;
  c.config.years = 1;
  c.config.risk_tolerance = 1.0;
  c.config.uncertainty_budget = budget;
  c.config.shed_penalty = 1000.0;
  c.config.solar_cost = {1e5};
  c.config.segments = 1;
  c.config.epsilon = 1e-6;
  c.scenarios = {{"all", 8760.0}};
  for (int i = 0; i < 2; ++i) {
    Bus b;
    b.id = i + 1;
    const double d = i == 0 ? 0.0 : 50.0;
    b.nominal_demand = {{d}};
    b.demand_deviation = {{0.1 * d}};
    b.solar_availability = {{0.0}};
    b.solar_availability_deviation = {{0.0}};
    c.buses.push_back(b);
  }
  Generator g;
  g.id = "G1";
  g.p_max = 100.0;
  g.cost = {0.0, 20.0, 0.0};
  g.segments = piecewise_linearize_cost(g, 1);
  c.generators.push_back(g);
  auto line = [&](const std::string& id, double x, double rating, bool existing, double install, double psi) {
    Line l;
    l.id = id;
    l.from_bus = 0;
    l.to_bus = 1;
    l.reactance = x;
    l.rating = rating;
    l.existing = existing;
    l.install_cost = {existing ? 0.0 : install};
    l.modify_cost = {2e5};
    l.ignition_score = {{psi}};
    l.ignition_score_deviation = {{0.0}};
    c.lines.push_back(l);
  };
  line("L1", 0.2, 40.0, true, 0.0, 0.6);
  line("L2", 0.25, 40.0, false, 1e5, 0.7);
  return c;
}

std::vector<std::string> audit_dispatch(const CaseData& c, const PlanDecision& plan, const DispatchSolution& d,
                                        double tol) {
  std::vector<std::string> out;
  auto fail = [&](const std::string& what, std::size_t s, std::size_t y, double residual) {
    std::ostringstream os;
    os << what << " [s" << s << ",y" << y << "] residual " << residual;
    out.push_back(os.str());
  };
  const auto I = c.num_buses(), S = c.num_scenarios(), Y = c.num_years();
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t y = 0; y < Y; ++y) {
      std::vector<double> inj(I, 0.0);
      for (std::size_t g = 0; g < c.num_generators(); ++g) {
        const Generator& gen = c.generators[g];
        const double p = d.gen(g, s, y);
        if (p < gen.p_min - tol || p > gen.p_max + tol) fail("generator bounds " + gen.id, s, y, p);
        double seg = 0.0;
        for (std::size_t z = 0; z < gen.segments.size(); ++z) {
          const double v = d.gen_segment[z](g, s, y);
          if (v < -tol || v > gen.segments[z].capacity + tol) fail("segment bounds " + gen.id, s, y, v);
          seg += v;
        }
        if (std::abs(seg - p) > tol * (1 + p)) fail("segment sum " + gen.id, s, y, seg - p);
        inj[gen.bus] += p;
      }
      for (std::size_t i = 0; i < I; ++i) {
        const double sol = d.solar_dispatch(i, s, y);
        const double avail = c.buses[i].solar_candidate ? plan.solar_capacity(i, y) : 0.0;
        if (sol < -tol || sol > avail + tol) fail("solar bounds bus " + std::to_string(c.buses[i].id), s, y, sol);
        const double served = d.served(i, s, y);
        if (served < -tol || served > d.scheduled(i, s, y) + tol)
          fail("served bounds bus " + std::to_string(c.buses[i].id), s, y, served);
        inj[i] += sol - served;
      }
      double risk = 0.0;
      for (std::size_t l = 0; l < c.num_lines(); ++l) {
        const Line& line = c.lines[l];
        const double f = d.flow(l, s, y);
        const bool on = plan.line_energized(l, s, y) == 1;
        if (std::abs(f) > (on ? line.rating : 0.0) + tol) fail("line rating " + line.id, s, y, f);
        if (on) {
          const double dc = c.config.base_mva / line.reactance *
                            (d.angle(line.from_bus, s, y) - d.angle(line.to_bus, s, y));
          if (std::abs(dc - f) > tol * (1 + std::abs(f))) fail("dc flow " + line.id, s, y, dc - f);
          risk += score_threshold(c, l, s, y, plan.line_modified(l, y) == 1);
        }
        inj[line.to_bus] += f;
        inj[line.from_bus] -= f;
      }
      for (std::size_t i = 0; i < I; ++i)
        if (std::abs(inj[i]) > tol * 100) fail("balance bus " + std::to_string(c.buses[i].id), s, y, inj[i]);
      if (risk > c.config.risk_tolerance + 1e-9) fail("risk budget", s, y, risk - c.config.risk_tolerance);
    }
  return out;
}

}  // namespace wildgrid::testing
