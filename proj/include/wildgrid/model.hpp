#pragma once

// Domain types for a multi-year expansion planning study under wildfire
// ignition risk, plus the small pure operations that act on them.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wildgrid/grid.hpp"

namespace wildgrid {

/// Per-entity table indexed [year][scenario].
using YearScenarioTable = std::vector<std::vector<double>>;

/// Raised for inputs that violate a documented precondition.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CostSegment {
  double slope = 0.0;     // $/MWh
  double capacity = 0.0;  // MW
  bool operator==(const CostSegment&) const = default;
};

struct QuadraticCost {
  double a = 0.0;  // $/h
  double b = 0.0;  // $/MWh
  double c = 0.0;  // $/MW^2h
  bool operator==(const QuadraticCost&) const = default;
};

struct Bus {
  int id = 0;
  bool solar_candidate = false;
  YearScenarioTable nominal_demand;
  YearScenarioTable demand_deviation;
  YearScenarioTable solar_availability;
  YearScenarioTable solar_availability_deviation;
  bool operator==(const Bus&) const = default;
};

struct Generator {
  std::string id;
  std::size_t bus = 0;  // index into CaseData::buses
  double p_min = 0.0;
  double p_max = 0.0;
  QuadraticCost cost;
  std::vector<CostSegment> segments;
  bool operator==(const Generator&) const = default;
};

struct Line {
  std::string id;
  std::size_t from_bus = 0;  // index into CaseData::buses
  std::size_t to_bus = 0;
  double reactance = 0.0;  // p.u.
  double rating = 0.0;     // MW
  bool existing = false;
  std::vector<double> install_cost;  // per year
  std::vector<double> modify_cost;   // per year
  YearScenarioTable ignition_score;
  YearScenarioTable ignition_score_deviation;
  bool operator==(const Line&) const = default;
};

struct Scenario {
  std::string label;
  double hours = 0.0;  // hours per year this scenario occurs
  bool operator==(const Scenario&) const = default;
};

enum class EpsilonMode { Absolute, Relative };

struct PlanningConfig {
  int years = 1;
  double risk_tolerance = 0.0;
  int uncertainty_budget = 0;
  double shed_penalty = 1000.0;
  std::optional<double> big_m;  // derived from the network when absent
  double delta = 0.5;
  std::vector<double> solar_cost;  // $/MW per year
  double epsilon = 1e-4;
  EpsilonMode epsilon_mode = EpsilonMode::Relative;
  int max_iterations = 20;
  int segments = 3;
  double base_mva = 100.0;
  std::optional<double> solar_max_mw;  // per bus-year cap on installed solar
  // Fractions used to fill deviations not given explicitly in the case file.
  double demand_uncertainty = 0.0;
  double solar_uncertainty = 0.0;
  double ignition_uncertainty = 0.0;
  bool operator==(const PlanningConfig&) const = default;
};

struct CaseData {
  std::vector<Bus> buses;
  std::vector<Generator> generators;
  std::vector<Line> lines;
  std::vector<Scenario> scenarios;
  PlanningConfig config;

  std::size_t num_buses() const { return buses.size(); }
  std::size_t num_generators() const { return generators.size(); }
  std::size_t num_lines() const { return lines.size(); }
  std::size_t num_scenarios() const { return scenarios.size(); }
  std::size_t num_years() const { return static_cast<std::size_t>(config.years); }

  std::optional<std::size_t> bus_index(int id) const;
  bool operator==(const CaseData&) const = default;
};

/// First-stage (here-and-now) decisions.
struct PlanDecision {
  Grid2<int> line_exists;       // [l][y]
  Grid2<int> line_modified;     // [l][y]
  Grid3<int> line_energized;    // [l][s][y]
  Grid3<double> aux;            // [l][s][y], modified AND energized
  Grid2<double> solar_capacity; // [i][y], MW

  static PlanDecision empty(const CaseData& c);
  bool operator==(const PlanDecision&) const = default;
};

/// Binary selector grid over (bus, scenario, year).
class FlagGrid {
 public:
  FlagGrid() = default;
  FlagGrid(std::size_t buses, std::size_t scenarios, std::size_t years)
      : grid_(buses, scenarios, years, 0) {}

  std::uint8_t& operator()(std::size_t i, std::size_t s, std::size_t y) { return grid_(i, s, y); }
  std::uint8_t operator()(std::size_t i, std::size_t s, std::size_t y) const { return grid_(i, s, y); }
  std::size_t count() const;
  const std::vector<std::uint8_t>& data() const { return grid_.data(); }
  std::size_t buses() const { return grid_.dim0(); }
  std::size_t scenarios() const { return grid_.dim1(); }
  std::size_t years() const { return grid_.dim2(); }
  bool operator==(const FlagGrid&) const = default;

 private:
  Grid3<std::uint8_t> grid_;
};

/// One vertex of the budgeted binary uncertainty set.
struct UncertaintyRealization {
  FlagGrid u_demand, v_demand, u_solar, v_solar;

  static UncertaintyRealization nominal(const CaseData& c);
  /// Number of budget-consuming flags (u-flags only).
  std::size_t budget_used() const { return u_demand.count() + u_solar.count(); }
  bool is_nominal() const;
  /// Flattened (u_D, v_D, u_R, v_R) per (bus, scenario, year), the
  /// ordering used for deterministic tie-breaks.
  std::vector<std::uint8_t> key() const;
  bool operator==(const UncertaintyRealization&) const = default;
};

/// Demand and solar availability after applying a realization, [i][y][s].
struct RealizedData {
  std::vector<YearScenarioTable> demand;
  std::vector<YearScenarioTable> solar_availability;
};

struct DispatchSolution {
  Grid3<double> gen;                        // [g][s][y]
  std::vector<Grid3<double>> gen_segment;   // [z] -> [g][s][y]
  Grid3<double> solar_dispatch;             // [i][s][y]
  Grid3<double> served;                     // [i][s][y]
  Grid3<double> scheduled;                  // [i][s][y]
  Grid3<double> flow;                       // [l][s][y]
  Grid3<double> angle;                      // [i][s][y]
  Grid3<double> score;                      // [l][s][y]
};

/// Equal-width segments over [0, p_max]; slope is the marginal cost b + 2cx
/// at each interval midpoint. The fixed term a is dropped.
std::vector<CostSegment> piecewise_linearize_cost(const Generator& gen, int num_segments);

/// Per-entry upward/downward deviations that a u/v flag actually moves the
/// value by, after clipping demand at 0 and availability to [0, 1].
struct EffectiveDeviation {
  double up = 0.0;
  double down = 0.0;
};
EffectiveDeviation demand_deviation(const CaseData& c, std::size_t bus, std::size_t s, std::size_t y);
EffectiveDeviation solar_deviation(const CaseData& c, std::size_t bus, std::size_t s, std::size_t y);

/// Pure: realized demand and availability for the given vertex.
RealizedData apply_realization(const CaseData& c, const UncertaintyRealization& r);

/// Checks every type invariant; an empty result means the case is valid.
std::vector<std::string> validate_case(const CaseData& c);

/// Structural invariants of a first-stage decision.
std::vector<std::string> check_plan(const CaseData& c, const PlanDecision& plan, double tol = 1e-6);

/// Realization invariants: u+v <= 1 per channel entry, budget on u-flags.
std::vector<std::string> check_realization(const CaseData& c, const UncertaintyRealization& r);

/// Angle reference: lowest-numbered bus that hosts a generator, else bus 0.
std::size_t reference_bus(const CaseData& c);

/// Big-M for the switched DC flow constraint: the configured value or
/// 10 * (max rating + max(base/x) * pi).
double flow_big_m(const CaseData& c);

/// Investment cost of a plan split by category, per year.
struct InvestmentCost {
  std::vector<double> lines, modification, solar;
  double total() const;
};
InvestmentCost investment_cost(const CaseData& c, const PlanDecision& plan);

/// Ignition score threshold of an energized line: (psi + dpsi) * (1 - delta * modified).
double score_threshold(const CaseData& c, std::size_t line, std::size_t s, std::size_t y, bool modified);

}  // namespace wildgrid
