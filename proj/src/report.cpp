#include "wildgrid/report.hpp"

#include <cmath>
#include <cstdio>

#include "wildgrid/subproblem.hpp"

namespace wildgrid {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::vector<EnergizedHoursRow> report_energized_hours(const CaseData& c, const PlanDecision& plan) {
  std::vector<EnergizedHoursRow> out;
  for (std::size_t l = 0; l < c.num_lines(); ++l)
    for (std::size_t y = 0; y < c.num_years(); ++y) {
      double hours = 0.0;
      for (std::size_t s = 0; s < c.num_scenarios(); ++s)
        hours += c.scenarios[s].hours * plan.line_energized(l, s, y);
      out.push_back({c.lines[l].id, static_cast<int>(y) + 1, hours});
    }
  return out;
}

Report build_report(const CaseData& c, const RobustPlanResult& result, ReportRealization which) {
  Report rep;
  rep.realization =
      which == ReportRealization::Worst ? result.worst_realization : UncertaintyRealization::nominal(c);
  if (rep.realization.u_demand.buses() != c.num_buses()) rep.realization = UncertaintyRealization::nominal(c);
  const RecourseDispatch op = solve_recourse(c, result.plan, rep.realization);
  rep.dispatch = op.dispatch;
  const auto S = c.num_scenarios(), Y = c.num_years();

  rep.energized = report_energized_hours(c, result.plan);
  for (std::size_t i = 0; i < c.num_buses(); ++i)
    for (std::size_t y = 0; y < Y; ++y)
      for (std::size_t s = 0; s < S; ++s) {
        const double shed = op.dispatch.scheduled(i, s, y) - op.dispatch.served(i, s, y);
        const double mwh = c.scenarios[s].hours * shed;
        if (mwh > 1e-6) rep.shedding.push_back({c.buses[i].id, static_cast<int>(y) + 1, c.scenarios[s].label, mwh});
      }
  for (std::size_t i = 0; i < c.num_buses(); ++i) {
    if (!c.buses[i].solar_candidate) continue;
    for (std::size_t y = 0; y < Y; ++y)
      rep.solar.push_back({c.buses[i].id, static_cast<int>(y) + 1, result.plan.solar_capacity(i, y)});
  }
  const InvestmentCost inv = investment_cost(c, result.plan);
  for (std::size_t y = 0; y < Y; ++y) {
    CostRow row;
    row.year = static_cast<int>(y) + 1;
    row.invest_lines = inv.lines[y];
    row.invest_mod = inv.modification[y];
    row.invest_solar = inv.solar[y];
    for (std::size_t s = 0; s < S; ++s) row.operation += op.period_cost[s * Y + y];
    row.total = row.invest_lines + row.invest_mod + row.invest_solar + row.operation;
    rep.costs.push_back(row);
  }
  return rep;
}

}  // namespace wildgrid
