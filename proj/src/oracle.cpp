#include "wildgrid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "wildgrid/subproblem.hpp"

namespace wildgrid {

namespace {

// Per-entry channel states: 0 none, 1 v (down), 2 u (up). Ascending order
// of (u, v) keeps enumeration in key order.
struct Option {
  std::uint8_t demand, solar;
  int budget;
};

std::vector<Option> entry_options(bool prune, bool demand_up, bool solar_down) {
  std::vector<Option> out;
  std::vector<std::uint8_t> demand{0, 1, 2}, solar{0, 1, 2};
  if (prune) {
    // Flags that move nothing only duplicate a smaller key.
    demand = demand_up ? std::vector<std::uint8_t>{0, 2} : std::vector<std::uint8_t>{0};
    solar = solar_down ? std::vector<std::uint8_t>{0, 1} : std::vector<std::uint8_t>{0};
  }
  for (std::uint8_t d : demand)
    for (std::uint8_t r : solar) out.push_back({d, r, (d == 2) + (r == 2)});
  return out;
}

std::vector<std::vector<Option>> options_per_entry(const CaseData& c, bool prune) {
  const std::size_t S = c.num_scenarios(), Y = c.num_years();
  std::vector<std::vector<Option>> out;
  for (std::size_t i = 0; i < c.num_buses(); ++i)
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t y = 0; y < Y; ++y)
        out.push_back(entry_options(prune, demand_deviation(c, i, s, y).up > 0.0,
                                    c.buses[i].solar_candidate && solar_deviation(c, i, s, y).down > 0.0));
  return out;
}

void set_entry(UncertaintyRealization& r, std::size_t i, std::size_t s, std::size_t y, const Option& o) {
  r.u_demand(i, s, y) = o.demand == 2;
  r.v_demand(i, s, y) = o.demand == 1;
  r.u_solar(i, s, y) = o.solar == 2;
  r.v_solar(i, s, y) = o.solar == 1;
}

}  // namespace

std::size_t count_realizations(const CaseData& c, int budget, bool prune) {
  const std::size_t E = static_cast<std::size_t>(std::max(0, budget));
  // poly[k] = number of partial assignments using k budget units.
  std::vector<double> poly(E + 1, 0.0);
  poly[0] = 1.0;
  for (const auto& opts : options_per_entry(c, prune)) {
    std::vector<double> next(E + 1, 0.0);
    for (std::size_t k = 0; k <= E; ++k)
      for (const Option& o : opts)
        if (k + static_cast<std::size_t>(o.budget) <= E) next[k + static_cast<std::size_t>(o.budget)] += poly[k];
    poly = std::move(next);
  }
  double total = 0.0;
  for (double v : poly) total += v;
  if (total > static_cast<double>(std::numeric_limits<std::size_t>::max() / 2))
    return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(total);
}

void enumerate_realizations(const CaseData& c, int budget, const OracleOptions& options,
                            const std::function<void(const UncertaintyRealization&)>& visit) {
  const std::size_t n = count_realizations(c, budget, options.prune);
  if (n > options.max_vertices)
    throw OracleLimitError("instance too large for oracle: " + std::to_string(n) + " vertices exceed the limit of " +
                           std::to_string(options.max_vertices));
  const auto opts = options_per_entry(c, options.prune);
  const std::size_t S = c.num_scenarios(), Y = c.num_years();
  const std::size_t entries = c.num_buses() * S * Y;
  UncertaintyRealization r = UncertaintyRealization::nominal(c);
  const int E = std::max(0, budget);
  std::function<void(std::size_t, int)> rec = [&](std::size_t e, int left) {
    if (e == entries) {
      visit(r);
      return;
    }
    const std::size_t i = e / (S * Y), s = (e / Y) % S, y = e % Y;
    for (const Option& o : opts[e]) {
      if (o.budget > left) continue;
      set_entry(r, i, s, y, o);
      rec(e + 1, left - o.budget);
    }
    set_entry(r, i, s, y, Option{0, 0, 0});
  };
  rec(0, E);
}

std::vector<UncertaintyRealization> enumerate_realizations(const CaseData& c, int budget,
                                                           const OracleOptions& options) {
  std::vector<UncertaintyRealization> out;
  enumerate_realizations(c, budget, options, [&](const UncertaintyRealization& r) { out.push_back(r); });
  return out;
}

WorstCase worst_case_brute_force(const CaseData& c, const PlanDecision& plan, const OracleOptions& options) {
  require_valid_plan(c, plan);
  const std::size_t I = c.num_buses(), S = c.num_scenarios(), Y = c.num_years();
  // Period values depend only on that period's flags; cache them.
  std::vector<std::map<std::vector<std::uint8_t>, double>> cache(S * Y);
  WorstCase best;
  bool have = false;
  std::vector<std::uint8_t> local(2 * I);
  enumerate_realizations(c, c.config.uncertainty_budget, options, [&](const UncertaintyRealization& r) {
    ++best.vertices;
    double total = 0.0;
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t y = 0; y < Y; ++y) {
        for (std::size_t i = 0; i < I; ++i) {
          local[2 * i] = static_cast<std::uint8_t>(r.u_demand(i, s, y) * 2 + r.v_demand(i, s, y));
          local[2 * i + 1] = static_cast<std::uint8_t>(r.u_solar(i, s, y) * 2 + r.v_solar(i, s, y));
        }
        auto& slot = cache[s * Y + y];
        auto it = slot.find(local);
        if (it == slot.end()) {
          std::vector<double> demand(I), avail(I);
          for (std::size_t i = 0; i < I; ++i) {
            const Bus& b = c.buses[i];
            const EffectiveDeviation dd = demand_deviation(c, i, s, y);
            const EffectiveDeviation sd = solar_deviation(c, i, s, y);
            demand[i] = b.nominal_demand[y][s] + dd.up * r.u_demand(i, s, y) - dd.down * r.v_demand(i, s, y);
            avail[i] = b.solar_availability[y][s] + sd.up * r.u_solar(i, s, y) - sd.down * r.v_solar(i, s, y);
          }
          it = slot.emplace(local, period_recourse_value(c, plan, s, y, demand, avail)).first;
          ++best.lp_solves;
        }
        total += it->second;
      }
    if (!have || total > best.cost + 1e-9 * std::max(1.0, std::abs(best.cost))) {
      best.cost = total;
      best.realization = r;
      have = true;
    }
  });
  return best;
}

}  // namespace wildgrid
