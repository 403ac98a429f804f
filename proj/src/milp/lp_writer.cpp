#include "wildgrid/milp/lp_writer.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <vector>

namespace wildgrid::milp {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Namer {
 public:
  std::string operator()(const std::string& raw, const char* fallback, std::size_t idx) {
    std::string s;
    for (char ch : raw) {
      const auto c = static_cast<unsigned char>(ch);
      s.push_back(std::isalnum(c) || ch == '_' || ch == '.' || ch == '(' || ch == ')' || ch == '[' || ch == ']' ? ch : '_');
    }
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '.' || s[0] == 'e' || s[0] == 'E')
      s = fallback + std::to_string(idx) + "_" + s;
    if (s.size() > 200) s = fallback + std::to_string(idx);
    std::string out = s;
    for (int k = 1; used_.count(out); ++k) out = s + "_" + std::to_string(k);
    used_.insert(out);
    return out;
  }

 private:
  std::set<std::string> used_;
};

void write_terms(std::ostream& out, const std::vector<Term>& terms, const std::vector<std::string>& names) {
  int on_line = 0;
  bool first = true;
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    out << (t.coef < 0 ? (first ? "-" : " -") : (first ? "" : " +")) << ' ' << num(std::abs(t.coef)) << ' '
        << names[static_cast<std::size_t>(t.var)];
    first = false;
    if (++on_line == 8) {
      out << "\n   ";
      on_line = 0;
    }
  }
  if (first) out << " 0 " << (names.empty() ? std::string("x") : names.front());
}

}  // namespace

void write_lp(std::ostream& out, const MilpProblem& p, const std::string& title) {
  Namer var_namer, row_namer;
  std::vector<std::string> names;
  names.reserve(p.num_vars());
  for (std::size_t j = 0; j < p.num_vars(); ++j) names.push_back(var_namer(p.variables()[j].name, "x", j));

  if (!title.empty()) out << "\\ " << title << '\n';
  out << (p.sense() == ObjSense::Maximize ? "Maximize\n" : "Minimize\n") << " obj:";
  std::vector<Term> obj;
  for (std::size_t j = 0; j < p.num_vars(); ++j)
    if (p.objective_coefficients()[j] != 0.0) obj.push_back({static_cast<int>(j), p.objective_coefficients()[j]});
  write_terms(out, obj, names);
  if (p.objective_constant() != 0.0)
    out << (p.objective_constant() < 0 ? " - " : " + ") << num(std::abs(p.objective_constant()));
  out << "\nSubject To\n";
  for (std::size_t r = 0; r < p.num_rows(); ++r) {
    const Constraint& c = p.constraints()[r];
    const bool lo = std::isfinite(c.lo), hi = std::isfinite(c.hi);
    if (lo && hi && c.lo == c.hi) {
      out << ' ' << row_namer(c.name, "r", r) << ':';
      write_terms(out, c.terms, names);
      out << " = " << num(c.lo) << '\n';
      continue;
    }
    if (lo) {
      out << ' ' << row_namer(c.name + (hi ? "_lo" : ""), "r", r) << ':';
      write_terms(out, c.terms, names);
      out << " >= " << num(c.lo) << '\n';
    }
    if (hi) {
      out << ' ' << row_namer(c.name + (lo ? "_hi" : ""), "r", r) << ':';
      write_terms(out, c.terms, names);
      out << " <= " << num(c.hi) << '\n';
    }
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < p.num_vars(); ++j) {
    const Variable& v = p.variables()[j];
    if (v.kind == VarKind::Binary && v.lo == 0.0 && v.hi == 1.0) continue;
    const bool lo = std::isfinite(v.lo), hi = std::isfinite(v.hi);
    if (!lo && !hi) {
      out << ' ' << names[j] << " free\n";
    } else if (lo && hi && v.lo == v.hi) {
      out << ' ' << names[j] << " = " << num(v.lo) << '\n';
    } else {
      out << ' ' << (lo ? num(v.lo) : std::string("-inf")) << " <= " << names[j] << " <= "
          << (hi ? num(v.hi) : std::string("+inf")) << '\n';
    }
  }
  if (p.num_binaries() > 0) {
    out << "Binaries\n";
    for (std::size_t j = 0; j < p.num_vars(); ++j)
      if (p.variables()[j].kind == VarKind::Binary) out << ' ' << names[j] << '\n';
  }
  out << "End\n";
}

void write_lp_file(const std::string& path, const MilpProblem& p, const std::string& title) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_lp(f, p, title);
  if (!f) throw std::runtime_error("error writing " + path);
}

}  // namespace wildgrid::milp
