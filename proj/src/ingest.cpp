#include "wildgrid/ingest.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wildgrid/ccga.hpp"
#include "wildgrid/report.hpp"

namespace wildgrid {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ConfigError(where + ": " + what); }

const json& need(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + "." + key, "missing required field");
  return *it;
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where, "must be finite");
  return d;
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

bool as_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) fail(where, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_vector(const json& v, const std::string& where, std::size_t len) {
  if (!v.is_array()) fail(where, "expected an array");
  if (v.size() < len) fail(where, "expected " + std::to_string(len) + " entries, got " + std::to_string(v.size()));
  std::vector<double> out;
  for (std::size_t k = 0; k < len; ++k) out.push_back(as_number(v[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

YearScenarioTable as_table(const json& v, const std::string& where, std::size_t years, std::size_t scenarios) {
  if (!v.is_array()) fail(where, "expected an array of per-year rows");
  if (v.size() < years)
    fail(where, "expected " + std::to_string(years) + " year rows, got " + std::to_string(v.size()));
  YearScenarioTable t;
  for (std::size_t y = 0; y < years; ++y) {
    const std::string w = where + "[" + std::to_string(y) + "]";
    if (!v[y].is_array() || v[y].size() != scenarios)
      fail(w, "expected " + std::to_string(scenarios) + " scenario values");
    t.push_back(as_vector(v[y], w, scenarios));
  }
  return t;
}

YearScenarioTable scaled(const YearScenarioTable& t, double f) {
  YearScenarioTable out = t;
  for (auto& row : out)
    for (double& x : row) x *= f;
  return out;
}

std::string percent(double f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g%%", f * 100.0);
  return buf;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

LoadedCase parse_case(const std::string& text, const CaseOverrides& ov, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON parse error: " +
                      e.what());
  }
  LoadedCase out;
  CaseData& c = out.data;
  auto& prov = out.provenance;

  if (!doc.is_object()) fail(source, "top level must be an object");
  if (doc.contains("version") && as_string(doc["version"], "version") != "1")
    fail("version", "unsupported case format version '" + doc["version"].get<std::string>() + "'");
  if (doc.contains("units") && !doc["units"].is_object()) fail("units", "expected an object");

  // config
  const json& cfg = need(doc, "config", "case");
  PlanningConfig& pc = c.config;
  const int file_years = as_int(need(cfg, "years", "config"), "config.years");
  if (file_years < 1) fail("config.years", "must be >= 1");
  if (ov.years) {
    if (*ov.years < 1 || *ov.years > file_years)
      fail("--years", "must lie in [1, " + std::to_string(file_years) + "] for this case");
    pc.years = *ov.years;
  } else {
    pc.years = file_years;
  }
  const std::size_t Y = static_cast<std::size_t>(pc.years);
  pc.risk_tolerance = as_number(need(cfg, "risk_tolerance", "config"), "config.risk_tolerance");
  pc.uncertainty_budget = as_int(need(cfg, "uncertainty_budget", "config"), "config.uncertainty_budget");
  pc.shed_penalty = as_number(need(cfg, "shed_penalty", "config"), "config.shed_penalty");
  if (cfg.contains("big_m") && !cfg["big_m"].is_null()) pc.big_m = as_number(cfg["big_m"], "config.big_m");
  if (cfg.contains("delta")) pc.delta = as_number(cfg["delta"], "config.delta");
  pc.solar_cost = as_vector(need(cfg, "solar_cost", "config"), "config.solar_cost", Y);
  if (cfg.contains("epsilon")) pc.epsilon = as_number(cfg["epsilon"], "config.epsilon");
  if (cfg.contains("epsilon_mode")) {
    const std::string mode = as_string(cfg["epsilon_mode"], "config.epsilon_mode");
    if (mode == "absolute")
      pc.epsilon_mode = EpsilonMode::Absolute;
    else if (mode == "relative")
      pc.epsilon_mode = EpsilonMode::Relative;
    else
      fail("config.epsilon_mode", "expected \"absolute\" or \"relative\"");
  }
  if (cfg.contains("max_iterations")) pc.max_iterations = as_int(cfg["max_iterations"], "config.max_iterations");
  if (cfg.contains("segments")) pc.segments = as_int(cfg["segments"], "config.segments");
  if (cfg.contains("base_mva")) pc.base_mva = as_number(cfg["base_mva"], "config.base_mva");
  if (cfg.contains("solar_max_mw") && !cfg["solar_max_mw"].is_null())
    pc.solar_max_mw = as_number(cfg["solar_max_mw"], "config.solar_max_mw");
  if (cfg.contains("uncertainty")) {
    const json& u = cfg["uncertainty"];
    if (!u.is_object()) fail("config.uncertainty", "expected an object");
    if (u.contains("demand")) pc.demand_uncertainty = as_number(u["demand"], "config.uncertainty.demand");
    if (u.contains("solar")) pc.solar_uncertainty = as_number(u["solar"], "config.uncertainty.solar");
    if (u.contains("ignition")) pc.ignition_uncertainty = as_number(u["ignition"], "config.uncertainty.ignition");
  }
  if (ov.uncertainty) pc.demand_uncertainty = pc.solar_uncertainty = *ov.uncertainty;
  if (ov.budget) pc.uncertainty_budget = *ov.budget;
  if (ov.risk_tolerance) pc.risk_tolerance = *ov.risk_tolerance;
  if (ov.shed_penalty) pc.shed_penalty = *ov.shed_penalty;
  if (ov.segments) pc.segments = *ov.segments;
  if (ov.epsilon) pc.epsilon = *ov.epsilon;
  if (ov.max_iterations) pc.max_iterations = *ov.max_iterations;

  // scenarios
  const json& sc = need(doc, "scenarios", "case");
  if (!sc.is_array() || sc.empty()) fail("scenarios", "expected a nonempty array");
  for (std::size_t s = 0; s < sc.size(); ++s) {
    const std::string w = "scenarios[" + std::to_string(s) + "]";
    c.scenarios.push_back({as_string(need(sc[s], "label", w), w + ".label"),
                           as_number(need(sc[s], "hours", w), w + ".hours")});
  }
  const std::size_t S = c.scenarios.size();

  // buses
  const json& buses = need(doc, "buses", "case");
  if (!buses.is_array()) fail("buses", "expected an array");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    const std::string w = "buses[" + std::to_string(i) + "]";
    const json& b = buses[i];
    Bus bus;
    bus.id = as_int(need(b, "id", w), w + ".id");
    bus.solar_candidate = b.contains("solar_candidate") && as_bool(b["solar_candidate"], w + ".solar_candidate");
    bus.nominal_demand = as_table(need(b, "nominal_demand", w), w + ".nominal_demand", Y, S);
    if (b.contains("demand_deviation")) {
      bus.demand_deviation = as_table(b["demand_deviation"], w + ".demand_deviation", Y, S);
    } else {
      bus.demand_deviation = scaled(bus.nominal_demand, pc.demand_uncertainty);
      prov.push_back(w + ".demand_deviation: " + percent(pc.demand_uncertainty) + " of nominal_demand");
    }
    if (b.contains("solar_availability")) {
      bus.solar_availability = as_table(b["solar_availability"], w + ".solar_availability", Y, S);
    } else {
      bus.solar_availability = YearScenarioTable(Y, std::vector<double>(S, 0.0));
      prov.push_back(w + ".solar_availability: 0 (not given)");
    }
    if (b.contains("solar_availability_deviation")) {
      bus.solar_availability_deviation =
          as_table(b["solar_availability_deviation"], w + ".solar_availability_deviation", Y, S);
    } else {
      bus.solar_availability_deviation = scaled(bus.solar_availability, pc.solar_uncertainty);
      prov.push_back(w + ".solar_availability_deviation: " + percent(pc.solar_uncertainty) +
                     " of solar_availability");
    }
    c.buses.push_back(std::move(bus));
  }
  auto bus_ref = [&](const json& v, const std::string& where, const std::string& owner) {
    const int id = as_int(v, where);
    const auto idx = c.bus_index(id);
    if (!idx) fail(where, owner + " references unknown bus " + std::to_string(id));
    return *idx;
  };

  // generators
  const json& gens = need(doc, "generators", "case");
  if (!gens.is_array()) fail("generators", "expected an array");
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const std::string w = "generators[" + std::to_string(g) + "]";
    const json& j = gens[g];
    Generator gen;
    gen.id = as_string(need(j, "id", w), w + ".id");
    gen.bus = bus_ref(need(j, "bus", w), w + ".bus", "generator " + gen.id);
    gen.p_min = j.contains("p_min") ? as_number(j["p_min"], w + ".p_min") : 0.0;
    gen.p_max = as_number(need(j, "p_max", w), w + ".p_max");
    const json& cost = need(j, "cost", w);
    gen.cost.a = cost.contains("a") ? as_number(cost["a"], w + ".cost.a") : 0.0;
    gen.cost.b = as_number(need(cost, "b", w + ".cost"), w + ".cost.b");
    gen.cost.c = cost.contains("c") ? as_number(cost["c"], w + ".cost.c") : 0.0;
    if (j.contains("segments") && !ov.segments) {
      const json& segs = j["segments"];
      if (!segs.is_array()) fail(w + ".segments", "expected an array");
      for (std::size_t z = 0; z < segs.size(); ++z) {
        const std::string ws = w + ".segments[" + std::to_string(z) + "]";
        gen.segments.push_back(
            {as_number(need(segs[z], "slope", ws), ws + ".slope"), as_number(need(segs[z], "capacity", ws), ws + ".capacity")});
      }
    } else {
      try {
        gen.segments = piecewise_linearize_cost(gen, pc.segments);
      } catch (const ConfigError& e) {
        fail(w, e.what());
      }
    }
    c.generators.push_back(std::move(gen));
  }

  // lines
  const json& lines = need(doc, "lines", "case");
  if (!lines.is_array()) fail("lines", "expected an array");
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const std::string w = "lines[" + std::to_string(l) + "]";
    const json& j = lines[l];
    Line line;
    line.id = as_string(need(j, "id", w), w + ".id");
    line.from_bus = bus_ref(need(j, "from", w), w + ".from", "line " + line.id);
    line.to_bus = bus_ref(need(j, "to", w), w + ".to", "line " + line.id);
    line.reactance = as_number(need(j, "reactance", w), w + ".reactance");
    line.rating = as_number(need(j, "rating", w), w + ".rating");
    line.existing = as_bool(need(j, "existing", w), w + ".existing");
    if (j.contains("install_cost")) {
      line.install_cost = as_vector(j["install_cost"], w + ".install_cost", Y);
    } else if (line.existing) {
      line.install_cost.assign(Y, 0.0);
    } else {
      fail(w + ".install_cost", "required for candidate line " + line.id);
    }
    if (j.contains("modify_cost")) {
      line.modify_cost = as_vector(j["modify_cost"], w + ".modify_cost", Y);
    } else {
      fail(w + ".modify_cost", "missing required field");
    }
    line.ignition_score = as_table(need(j, "ignition_score", w), w + ".ignition_score", Y, S);
    if (j.contains("ignition_score_deviation")) {
      line.ignition_score_deviation = as_table(j["ignition_score_deviation"], w + ".ignition_score_deviation", Y, S);
    } else {
      line.ignition_score_deviation = scaled(line.ignition_score, pc.ignition_uncertainty);
      prov.push_back(w + ".ignition_score_deviation: " + percent(pc.ignition_uncertainty) + " of ignition_score");
    }
    c.lines.push_back(std::move(line));
  }

  if (const auto errs = validate_case(c); !errs.empty()) {
    std::string msg = source + ": case fails validation (" + std::to_string(errs.size()) + " violations):";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return out;
}

LoadedCase load_case(const std::string& path, const CaseOverrides& overrides) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path + ": cannot open case file");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_case(ss.str(), overrides, path);
}

std::string case_to_json(const CaseData& c) {
  const PlanningConfig& pc = c.config;
  ojson doc;
  doc["version"] = "1";
  doc["units"] = {{"power", "MW"}, {"energy", "MWh"}, {"cost", "$"}, {"reactance", "p.u."}, {"hours", "h/year"}};
  ojson cfg;
  cfg["years"] = pc.years;
  cfg["risk_tolerance"] = pc.risk_tolerance;
  cfg["uncertainty_budget"] = pc.uncertainty_budget;
  cfg["shed_penalty"] = pc.shed_penalty;
  if (pc.big_m) cfg["big_m"] = *pc.big_m;
  cfg["delta"] = pc.delta;
  cfg["solar_cost"] = pc.solar_cost;
  cfg["epsilon"] = pc.epsilon;
  cfg["epsilon_mode"] = pc.epsilon_mode == EpsilonMode::Absolute ? "absolute" : "relative";
  cfg["max_iterations"] = pc.max_iterations;
  cfg["segments"] = pc.segments;
  cfg["base_mva"] = pc.base_mva;
  if (pc.solar_max_mw) cfg["solar_max_mw"] = *pc.solar_max_mw;
  cfg["uncertainty"] = {{"demand", pc.demand_uncertainty},
                        {"solar", pc.solar_uncertainty},
                        {"ignition", pc.ignition_uncertainty}};
  doc["config"] = cfg;
  ojson sc = ojson::array();
  for (const Scenario& s : c.scenarios) sc.push_back({{"label", s.label}, {"hours", s.hours}});
  doc["scenarios"] = sc;
  ojson buses = ojson::array();
  for (const Bus& b : c.buses) {
    ojson j;
    j["id"] = b.id;
    j["solar_candidate"] = b.solar_candidate;
    j["nominal_demand"] = b.nominal_demand;
    j["demand_deviation"] = b.demand_deviation;
    j["solar_availability"] = b.solar_availability;
    j["solar_availability_deviation"] = b.solar_availability_deviation;
    buses.push_back(j);
  }
  doc["buses"] = buses;
  ojson gens = ojson::array();
  for (const Generator& g : c.generators) {
    ojson j;
    j["id"] = g.id;
    j["bus"] = c.buses[g.bus].id;
    j["p_min"] = g.p_min;
    j["p_max"] = g.p_max;
    j["cost"] = {{"a", g.cost.a}, {"b", g.cost.b}, {"c", g.cost.c}};
    bool derived = false;
    try {
      derived = piecewise_linearize_cost(g, pc.segments) == g.segments;
    } catch (const ConfigError&) {
    }
    if (!derived) {
      ojson segs = ojson::array();
      for (const CostSegment& s : g.segments) segs.push_back({{"slope", s.slope}, {"capacity", s.capacity}});
      j["segments"] = segs;
    }
    gens.push_back(j);
  }
  doc["generators"] = gens;
  ojson lines = ojson::array();
  for (const Line& l : c.lines) {
    ojson j;
    j["id"] = l.id;
    j["from"] = c.buses[l.from_bus].id;
    j["to"] = c.buses[l.to_bus].id;
    j["reactance"] = l.reactance;
    j["rating"] = l.rating;
    j["existing"] = l.existing;
    j["install_cost"] = l.install_cost;
    j["modify_cost"] = l.modify_cost;
    j["ignition_score"] = l.ignition_score;
    j["ignition_score_deviation"] = l.ignition_score_deviation;
    lines.push_back(j);
  }
  doc["lines"] = lines;
  return doc.dump(2) + "\n";
}

void write_case(const CaseData& c, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error(path + ": cannot open for writing");
  f << case_to_json(c);
  if (!f) throw std::runtime_error(path + ": write failed");
}

CaseData restrict_to_scenario(const CaseData& c, const std::string& label) {
  std::size_t keep = c.num_scenarios();
  for (std::size_t s = 0; s < c.num_scenarios(); ++s)
    if (c.scenarios[s].label == label) keep = s;
  if (keep == c.num_scenarios()) throw ConfigError("restrict_to_scenario: no scenario labelled '" + label + "'");
  auto pick = [&](const YearScenarioTable& t) {
    YearScenarioTable out;
    for (const auto& row : t) out.push_back({row[keep]});
    return out;
  };
  CaseData out = c;
  out.scenarios = {Scenario{label, 8760.0}};
  for (Bus& b : out.buses) {
    b.nominal_demand = pick(b.nominal_demand);
    b.demand_deviation = pick(b.demand_deviation);
    b.solar_availability = pick(b.solar_availability);
    b.solar_availability_deviation = pick(b.solar_availability_deviation);
  }
  for (Line& l : out.lines) {
    l.ignition_score = pick(l.ignition_score);
    l.ignition_score_deviation = pick(l.ignition_score_deviation);
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& content, std::vector<std::string>& written) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error(p.string() + ": cannot open for writing");
  f << content;
  if (!f) throw std::runtime_error(p.string() + ": write failed");
  written.push_back(p.string());
}

}  // namespace

std::vector<std::string> write_result(const CaseData& c, const RobustPlanResult& result, const std::string& dir,
                                      ReportRealization which) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error(dir + ": cannot create output directory: " + ec.message());
  const Report rep = build_report(c, result, which);
  const std::filesystem::path base(dir);
  std::vector<std::string> written;
  const auto& fmt = format_number;

  std::string s = "line_id,year,hours\n";
  for (const auto& r : rep.energized) s += r.line_id + "," + std::to_string(r.year) + "," + fmt(r.hours) + "\n";
  write_file(base / "energized_hours.csv", s, written);

  s = "bus_id,year,scenario,mwh_shed\n";
  for (const auto& r : rep.shedding)
    s += std::to_string(r.bus_id) + "," + std::to_string(r.year) + "," + r.scenario + "," + fmt(r.mwh) + "\n";
  write_file(base / "load_shedding.csv", s, written);

  s = "bus_id,year,mw\n";
  for (const auto& r : rep.solar) s += std::to_string(r.bus_id) + "," + std::to_string(r.year) + "," + fmt(r.mw) + "\n";
  write_file(base / "installed_solar.csv", s, written);

  s = "year,invest_lines,invest_mod,invest_solar,operation,total\n";
  for (const auto& r : rep.costs)
    s += std::to_string(r.year) + "," + fmt(r.invest_lines) + "," + fmt(r.invest_mod) + "," + fmt(r.invest_solar) +
         "," + fmt(r.operation) + "," + fmt(r.total) + "\n";
  write_file(base / "cost_summary.csv", s, written);

  s = "iteration,lb,ub,gap,subproblem_ms,master_ms\n";
  for (const auto& it : result.iterations) {
    s += std::to_string(it.iteration) + "," + fmt(it.lb) + "," + fmt(it.ub) + "," + fmt(it.ub - it.lb) + ",";
    if (result.timings_recorded) s += fmt(it.subproblem_ms) + "," + fmt(it.master_ms);
    else s += ",";
    s += "\n";
  }
  write_file(base / "ccga_trace.csv", s, written);
  return written;
}

}  // namespace wildgrid
