#pragma once

#include <string>
#include <vector>

#include "wildgrid/ccga.hpp"
#include "wildgrid/ingest.hpp"
#include "wildgrid/model.hpp"

namespace wildgrid {

struct EnergizedHoursRow {
  std::string line_id;
  int year = 0;  // 1-based
  double hours = 0.0;
};

struct SheddingRow {
  int bus_id = 0;
  int year = 0;
  std::string scenario;
  double mwh = 0.0;
};

struct SolarRow {
  int bus_id = 0;
  int year = 0;
  double mw = 0.0;
};

struct CostRow {
  int year = 0;
  double invest_lines = 0.0, invest_mod = 0.0, invest_solar = 0.0, operation = 0.0, total = 0.0;
};

/// Hours per year each line is energized: sum over scenarios of R_s * I.
std::vector<EnergizedHoursRow> report_energized_hours(const CaseData& c, const PlanDecision& plan);

struct Report {
  std::vector<EnergizedHoursRow> energized;
  std::vector<SheddingRow> shedding;  // nonzero rows only
  std::vector<SolarRow> solar;
  std::vector<CostRow> costs;
  DispatchSolution dispatch;  // operating point behind shedding and costs
  UncertaintyRealization realization;
};

/// Re-solves the operating LP of the final plan under the chosen vertex.
Report build_report(const CaseData& c, const RobustPlanResult& result, ReportRealization which);

/// Fixed-point formatting used in every CSV ("%.6f", no negative zero).
std::string format_number(double v);

}  // namespace wildgrid
