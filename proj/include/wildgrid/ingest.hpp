#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wildgrid/model.hpp"

namespace wildgrid {

struct CcgaOptions;
struct RobustPlanResult;

/// Values that replace the case file's own configuration.
struct CaseOverrides {
  std::optional<int> years;           // truncate the horizon
  std::optional<double> uncertainty;  // demand and solar fraction for defaulted deviations
  std::optional<int> budget;
  std::optional<double> risk_tolerance;
  std::optional<double> shed_penalty;
  std::optional<int> segments;
  std::optional<double> epsilon;
  std::optional<int> max_iterations;
};

struct LoadedCase {
  CaseData data;
  /// One line per defaulted field, e.g. "buses[2].demand_deviation: 10% of nominal_demand".
  std::vector<std::string> provenance;
};

/// Parse errors carry line/column or a field path; validation failures list
/// every violation. Both are thrown as ConfigError.
LoadedCase parse_case(const std::string& text, const CaseOverrides& overrides = {},
                      const std::string& source = "<string>");
LoadedCase load_case(const std::string& path, const CaseOverrides& overrides = {});

/// Serializes every field explicitly, so parse_case(case_to_json(c)).data == c.
std::string case_to_json(const CaseData& c);
void write_case(const CaseData& c, const std::string& path);

/// Single-scenario study: keeps the named scenario and gives it all 8760 hours.
CaseData restrict_to_scenario(const CaseData& c, const std::string& label);

enum class ReportRealization { Worst, Nominal };

/// Writes energized_hours.csv, load_shedding.csv, installed_solar.csv,
/// cost_summary.csv and ccga_trace.csv into dir; returns the paths written.
std::vector<std::string> write_result(const CaseData& c, const RobustPlanResult& result, const std::string& dir,
                                      ReportRealization which = ReportRealization::Worst);

}  // namespace wildgrid
