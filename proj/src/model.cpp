#include "wildgrid/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wildgrid {

std::optional<std::size_t> CaseData::bus_index(int id) const {
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (buses[i].id == id) return i;
  }
  return std::nullopt;
}

PlanDecision PlanDecision::empty(const CaseData& c) {
  const auto L = c.num_lines(), S = c.num_scenarios(), Y = c.num_years(), I = c.num_buses();
  return PlanDecision{Grid2<int>(L, Y, 0), Grid2<int>(L, Y, 0), Grid3<int>(L, S, Y, 0),
                      Grid3<double>(L, S, Y, 0.0), Grid2<double>(I, Y, 0.0)};
}

std::size_t FlagGrid::count() const {
  return static_cast<std::size_t>(std::count(data().begin(), data().end(), std::uint8_t{1}));
}

UncertaintyRealization UncertaintyRealization::nominal(const CaseData& c) {
  const FlagGrid zero(c.num_buses(), c.num_scenarios(), c.num_years());
  return {zero, zero, zero, zero};
}

bool UncertaintyRealization::is_nominal() const {
  return u_demand.count() + v_demand.count() + u_solar.count() + v_solar.count() == 0;
}

std::vector<std::uint8_t> UncertaintyRealization::key() const {
  std::vector<std::uint8_t> k;
  k.reserve(u_demand.data().size() * 4);
  for (std::size_t i = 0; i < u_demand.buses(); ++i)
    for (std::size_t s = 0; s < u_demand.scenarios(); ++s)
      for (std::size_t y = 0; y < u_demand.years(); ++y) {
        k.push_back(u_demand(i, s, y));
        k.push_back(v_demand(i, s, y));
        k.push_back(u_solar(i, s, y));
        k.push_back(v_solar(i, s, y));
      }
  return k;
}

std::vector<CostSegment> piecewise_linearize_cost(const Generator& gen, int num_segments) {
  if (num_segments < 1) throw ConfigError("piecewise_linearize_cost: num_segments must be >= 1");
  if (gen.cost.c < 0.0)
    throw ConfigError("piecewise_linearize_cost: generator " + gen.id + " has non-convex cost (c < 0)");
  if (!(gen.p_max > 0.0))
    throw ConfigError("piecewise_linearize_cost: generator " + gen.id + " needs p_max > 0");
  const double width = gen.p_max / num_segments;
  std::vector<CostSegment> out;
  out.reserve(static_cast<std::size_t>(num_segments));
  for (int z = 0; z < num_segments; ++z) {
    const double mid = width * (z + 0.5);
    out.push_back({gen.cost.b + 2.0 * gen.cost.c * mid, width});
  }
  return out;
}

EffectiveDeviation demand_deviation(const CaseData& c, std::size_t bus, std::size_t s, std::size_t y) {
  const double p0 = c.buses[bus].nominal_demand[y][s];
  const double d = c.buses[bus].demand_deviation[y][s];
  return {d, std::min(d, p0)};
}

EffectiveDeviation solar_deviation(const CaseData& c, std::size_t bus, std::size_t s, std::size_t y) {
  const double k0 = c.buses[bus].solar_availability[y][s];
  const double d = c.buses[bus].solar_availability_deviation[y][s];
  return {std::min(k0 + d, 1.0) - k0, k0 - std::max(k0 - d, 0.0)};
}

RealizedData apply_realization(const CaseData& c, const UncertaintyRealization& r) {
  RealizedData out;
  out.demand.reserve(c.num_buses());
  out.solar_availability.reserve(c.num_buses());
  for (std::size_t i = 0; i < c.num_buses(); ++i) {
    const Bus& b = c.buses[i];
    YearScenarioTable dem = b.nominal_demand;
    YearScenarioTable kap = b.solar_availability;
    for (std::size_t y = 0; y < c.num_years(); ++y) {
      for (std::size_t s = 0; s < c.num_scenarios(); ++s) {
        const double dp = b.demand_deviation[y][s];
        dem[y][s] += dp * r.u_demand(i, s, y) - dp * r.v_demand(i, s, y);
        dem[y][s] = std::max(dem[y][s], 0.0);
        const double dk = b.solar_availability_deviation[y][s];
        kap[y][s] += dk * r.u_solar(i, s, y) - dk * r.v_solar(i, s, y);
        kap[y][s] = std::clamp(kap[y][s], 0.0, 1.0);
      }
    }
    out.demand.push_back(std::move(dem));
    out.solar_availability.push_back(std::move(kap));
  }
  return out;
}

namespace {

class Violations {
 public:
  void add(const std::string& entity, const std::string& field, const std::string& rule) {
    list_.push_back(entity + ": " + field + ": " + rule);
  }
  std::vector<std::string> take() { return std::move(list_); }

 private:
  std::vector<std::string> list_;
};

bool table_shape_ok(const YearScenarioTable& t, std::size_t years, std::size_t scenarios) {
  if (t.size() != years) return false;
  return std::all_of(t.begin(), t.end(), [&](const auto& row) { return row.size() == scenarios; });
}

}  // namespace

std::vector<std::string> validate_case(const CaseData& c) {
  Violations v;
  const auto Y = c.num_years(), S = c.num_scenarios();
  const PlanningConfig& cfg = c.config;

  if (cfg.years < 1) v.add("config", "years", "years >= 1");
  if (S == 0) v.add("config", "scenarios", "at least one scenario");
  if (c.buses.empty()) v.add("config", "buses", "at least one bus");
  if (!(cfg.risk_tolerance >= 0.0)) v.add("config", "risk_tolerance", "risk tolerance >= 0");
  if (cfg.uncertainty_budget < 0) v.add("config", "uncertainty_budget", "budget >= 0");
  if (!(cfg.delta >= 0.0 && cfg.delta <= 1.0)) v.add("config", "delta", "delta in [0,1]");
  if (!(cfg.epsilon > 0.0)) v.add("config", "epsilon", "epsilon > 0");
  if (cfg.max_iterations < 1) v.add("config", "max_iterations", "max_iterations >= 1");
  if (cfg.segments < 1) v.add("config", "segments", "segments >= 1");
  if (!(cfg.base_mva > 0.0)) v.add("config", "base_mva", "base_mva > 0");
  if (cfg.big_m && !(*cfg.big_m > 0.0)) v.add("config", "big_m", "big_m > 0");
  if (cfg.solar_cost.size() != Y) v.add("config", "solar_cost", "one entry per year");
  for (double cd : cfg.solar_cost)
    if (cd < 0.0) v.add("config", "solar_cost", "solar cost >= 0");

  double hours = 0.0;
  for (const auto& sc : c.scenarios) {
    if (!(sc.hours > 0.0)) v.add("scenario " + sc.label, "hours", "R_s > 0");
    hours += sc.hours;
  }
  if (S > 0 && std::abs(hours - 8760.0) > 1e-6) {
    std::ostringstream os;
    os << "sum of R_s = 8760 (got " << hours << ")";
    v.add("scenarios", "hours", os.str());
  }

  for (const auto& b : c.buses) {
    const std::string e = "bus " + std::to_string(b.id);
    bool shapes = true;
    for (const auto* t : {&b.nominal_demand, &b.demand_deviation, &b.solar_availability,
                          &b.solar_availability_deviation}) {
      if (!table_shape_ok(*t, Y, S)) shapes = false;
    }
    if (!shapes) {
      v.add(e, "tables", "per-year tables must be [years][scenarios]");
      continue;
    }
    for (std::size_t y = 0; y < Y; ++y)
      for (std::size_t s = 0; s < S; ++s) {
        if (!(b.nominal_demand[y][s] >= 0.0)) v.add(e, "nominal_demand", "nominal demand >= 0");
        if (!(b.demand_deviation[y][s] >= 0.0)) v.add(e, "demand_deviation", "demand deviation >= 0");
        const double k = b.solar_availability[y][s];
        if (!(k >= 0.0 && k <= 1.0)) v.add(e, "solar_availability", "availability in [0,1]");
        if (!(b.solar_availability_deviation[y][s] >= 0.0))
          v.add(e, "solar_availability_deviation", "availability deviation >= 0");
      }
  }

  double max_slope = 0.0;
  for (const auto& g : c.generators) {
    const std::string e = "generator " + g.id;
    if (g.bus >= c.num_buses()) v.add(e, "bus", "bus reference resolves");
    if (!(g.p_min >= 0.0 && g.p_min <= g.p_max)) v.add(e, "p_min", "0 <= p_min <= p_max");
    if (!(g.p_max > 0.0)) v.add(e, "p_max", "p_max > 0");
    if (g.cost.c < 0.0) v.add(e, "cost.c", "convex cost (c >= 0)");
    double cap = 0.0, prev = -1.0;
    for (const auto& seg : g.segments) {
      if (seg.slope < 0.0) v.add(e, "segments", "slope >= 0");
      if (seg.capacity < 0.0) v.add(e, "segments", "capacity >= 0");
      if (seg.slope < prev) v.add(e, "segments", "slopes nondecreasing");
      prev = seg.slope;
      cap += seg.capacity;
      max_slope = std::max(max_slope, seg.slope);
    }
    if (g.segments.empty())
      v.add(e, "segments", "at least one cost segment");
    else if (std::abs(cap - g.p_max) > 1e-6 * std::max(1.0, g.p_max))
      v.add(e, "segments", "segment capacities sum to p_max");
  }
  if (!(cfg.shed_penalty > max_slope))
    v.add("config", "shed_penalty", "K exceeds every generation segment slope");

  for (const auto& l : c.lines) {
    const std::string e = "line " + l.id;
    if (l.from_bus >= c.num_buses() || l.to_bus >= c.num_buses())
      v.add(e, "from_bus/to_bus", "bus reference resolves");
    else if (l.from_bus == l.to_bus)
      v.add(e, "from_bus/to_bus", "endpoints differ");
    if (!(l.reactance > 0.0)) v.add(e, "reactance", "reactance > 0");
    if (!(l.rating > 0.0)) v.add(e, "rating", "rating > 0");
    if (l.install_cost.size() != Y || l.modify_cost.size() != Y) {
      v.add(e, "install_cost/modify_cost", "one entry per year");
    } else {
      for (std::size_t y = 0; y < Y; ++y) {
        if (l.install_cost[y] < 0.0 || l.modify_cost[y] < 0.0) v.add(e, "costs", "costs >= 0");
        if (l.existing && l.install_cost[y] != 0.0)
          v.add(e, "install_cost", "install cost is zero for existing lines");
      }
    }
    if (!table_shape_ok(l.ignition_score, Y, S) || !table_shape_ok(l.ignition_score_deviation, Y, S)) {
      v.add(e, "ignition_score", "per-year tables must be [years][scenarios]");
      continue;
    }
    for (std::size_t y = 0; y < Y; ++y)
      for (std::size_t s = 0; s < S; ++s) {
        const double p = l.ignition_score[y][s];
        if (!(p >= 0.0 && p < 1.0)) v.add(e, "ignition_score", "score in [0,1)");
        if (!(l.ignition_score_deviation[y][s] >= 0.0))
          v.add(e, "ignition_score_deviation", "deviation >= 0");
      }
  }
  return v.take();
}

std::vector<std::string> check_plan(const CaseData& c, const PlanDecision& p, double tol) {
  Violations v;
  const auto L = c.num_lines(), S = c.num_scenarios(), Y = c.num_years(), I = c.num_buses();
  if (p.line_exists.rows() != L || p.line_exists.cols() != Y || p.line_modified.rows() != L ||
      p.line_energized.dim0() != L || p.line_energized.dim1() != S || p.line_energized.dim2() != Y ||
      p.solar_capacity.rows() != I || p.solar_capacity.cols() != Y) {
    v.add("plan", "shape", "dimensions match the case");
    return v.take();
  }
  auto is_bin = [](int x) { return x == 0 || x == 1; };
  for (std::size_t l = 0; l < L; ++l) {
    const std::string e = "line " + c.lines[l].id;
    for (std::size_t y = 0; y < Y; ++y) {
      const int ex = p.line_exists(l, y);
      if (!is_bin(ex) || !is_bin(p.line_modified(l, y))) v.add(e, "binary", "decisions are 0/1");
      if (c.lines[l].existing && ex != 1) v.add(e, "line_exists", "existing lines stay present");
      if (y > 0 && ex < p.line_exists(l, y - 1)) v.add(e, "line_exists", "existence is monotone");
      if (y > 0 && p.line_modified(l, y) < p.line_modified(l, y - 1))
        v.add(e, "line_modified", "modification is permanent");
      for (std::size_t s = 0; s < S; ++s) {
        const int en = p.line_energized(l, s, y);
        if (!is_bin(en)) v.add(e, "line_energized", "decisions are 0/1");
        if (en > ex) v.add(e, "line_energized", "energized only if present");
        const double want = static_cast<double>(en * p.line_modified(l, y));
        if (std::abs(p.aux(l, s, y) - want) > tol) v.add(e, "aux", "aux = modified * energized");
      }
    }
  }
  for (std::size_t i = 0; i < I; ++i) {
    const std::string e = "bus " + std::to_string(c.buses[i].id);
    for (std::size_t y = 0; y < Y; ++y) {
      const double cap = p.solar_capacity(i, y);
      if (cap < -tol) v.add(e, "solar_capacity", "capacity >= 0");
      if (!c.buses[i].solar_candidate && std::abs(cap) > tol)
        v.add(e, "solar_capacity", "only candidate buses host solar");
      if (y > 0 && cap < p.solar_capacity(i, y - 1) - tol)
        v.add(e, "solar_capacity", "capacity is nondecreasing");
    }
  }
  return v.take();
}

std::vector<std::string> check_realization(const CaseData& c, const UncertaintyRealization& r) {
  Violations v;
  const auto I = c.num_buses(), S = c.num_scenarios(), Y = c.num_years();
  for (const FlagGrid* g : {&r.u_demand, &r.v_demand, &r.u_solar, &r.v_solar}) {
    if (g->buses() != I || g->scenarios() != S || g->years() != Y) {
      v.add("realization", "shape", "dimensions match the case");
      return v.take();
    }
  }
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t y = 0; y < Y; ++y) {
        if (r.u_demand(i, s, y) + r.v_demand(i, s, y) > 1)
          v.add("realization", "demand", "u + v <= 1 per entry");
        if (r.u_solar(i, s, y) + r.v_solar(i, s, y) > 1)
          v.add("realization", "solar", "u + v <= 1 per entry");
      }
  if (r.budget_used() > static_cast<std::size_t>(std::max(0, c.config.uncertainty_budget)))
    v.add("realization", "budget", "sum of u-flags <= E");
  return v.take();
}

std::size_t reference_bus(const CaseData& c) {
  std::optional<std::size_t> best;
  for (const auto& g : c.generators) {
    if (!best || c.buses[g.bus].id < c.buses[*best].id) best = g.bus;
  }
  if (best) return *best;
  std::size_t lowest = 0;
  for (std::size_t i = 1; i < c.num_buses(); ++i)
    if (c.buses[i].id < c.buses[lowest].id) lowest = i;
  return lowest;
}

double flow_big_m(const CaseData& c) {
  if (c.config.big_m) return *c.config.big_m;
  double rating = 0.0, susceptance = 0.0;
  for (const auto& l : c.lines) {
    rating = std::max(rating, l.rating);
    susceptance = std::max(susceptance, c.config.base_mva / l.reactance);
  }
  return 10.0 * (rating + susceptance * std::numbers::pi);
}

double InvestmentCost::total() const {
  double t = 0.0;
  for (std::size_t y = 0; y < lines.size(); ++y) t += lines[y] + modification[y] + solar[y];
  return t;
}

InvestmentCost investment_cost(const CaseData& c, const PlanDecision& p) {
  const auto Y = c.num_years();
  InvestmentCost out{std::vector<double>(Y, 0.0), std::vector<double>(Y, 0.0), std::vector<double>(Y, 0.0)};
  for (std::size_t l = 0; l < c.num_lines(); ++l) {
    const Line& line = c.lines[l];
    for (std::size_t y = 0; y < Y; ++y) {
      const int prev_ex = y == 0 ? (line.existing ? 1 : 0) : p.line_exists(l, y - 1);
      const int prev_mod = y == 0 ? 0 : p.line_modified(l, y - 1);
      out.lines[y] += line.install_cost[y] * (p.line_exists(l, y) - prev_ex);
      out.modification[y] += line.modify_cost[y] * (p.line_modified(l, y) - prev_mod);
    }
  }
  for (std::size_t i = 0; i < c.num_buses(); ++i)
    for (std::size_t y = 0; y < Y; ++y) {
      const double prev = y == 0 ? 0.0 : p.solar_capacity(i, y - 1);
      out.solar[y] += c.config.solar_cost[y] * (p.solar_capacity(i, y) - prev);
    }
  return out;
}

double score_threshold(const CaseData& c, std::size_t line, std::size_t s, std::size_t y, bool modified) {
  const Line& l = c.lines[line];
  const double psi = l.ignition_score[y][s] + l.ignition_score_deviation[y][s];
  return psi * (1.0 - (modified ? c.config.delta : 0.0));
}

}  // namespace wildgrid
