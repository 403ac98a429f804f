#include "wildgrid/milp/highs_backend.hpp"

#include <dlfcn.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "wildgrid/milp/branch_and_bound.hpp"

#ifndef WILDGRID_HIGHS_DEFAULT_PATH
#define WILDGRID_HIGHS_DEFAULT_PATH ""
#endif

namespace wildgrid::milp {

namespace {

using HInt = std::int32_t;

enum HighsModelStatus : HInt {
  kOptimal = 7,
  kInfeasible = 8,
  kUnboundedOrInfeasible = 9,
  kUnbounded = 10,
};

struct Symbols {
  void* (*create)();
  void (*destroy)(void*);
  HInt (*pass_mip)(void*, HInt, HInt, HInt, HInt, HInt, double, const double*, const double*, const double*,
                   const double*, const double*, const HInt*, const HInt*, const double*, const HInt*);
  HInt (*run)(void*);
  HInt (*model_status)(const void*);
  HInt (*solution)(const void*, double*, double*, double*, double*);
  HInt (*double_info)(const void*, const char*, double*);
  HInt (*int_info)(const void*, const char*, HInt*);
  HInt (*set_bool)(void*, const char*, HInt);
  HInt (*set_int)(void*, const char*, HInt);
  HInt (*set_double)(void*, const char*, double);
  HInt (*set_string)(void*, const char*, const char*);
  HInt (*sizeof_int)();
};

template <class F>
bool bind(void* lib, const char* name, F& out) {
  out = reinterpret_cast<F>(dlsym(lib, name));
  return out != nullptr;
}

const Symbols* load_symbols() {
  static std::once_flag once;
  static Symbols sym;
  static bool ok = false;
  std::call_once(once, [] {
    std::vector<std::string> paths;
    if (const char* env = std::getenv("WILDGRID_HIGHS_LIBRARY"); env && *env) paths.emplace_back(env);
    if (*WILDGRID_HIGHS_DEFAULT_PATH) paths.emplace_back(WILDGRID_HIGHS_DEFAULT_PATH);
    paths.emplace_back("libhighs.so.1");
    paths.emplace_back("libhighs.so");
    void* lib = nullptr;
    for (const std::string& p : paths)
      if ((lib = dlopen(p.c_str(), RTLD_NOW | RTLD_LOCAL))) break;
    if (!lib) return;
    ok = bind(lib, "Highs_create", sym.create) && bind(lib, "Highs_destroy", sym.destroy) &&
         bind(lib, "Highs_passMip", sym.pass_mip) && bind(lib, "Highs_run", sym.run) &&
         bind(lib, "Highs_getModelStatus", sym.model_status) && bind(lib, "Highs_getSolution", sym.solution) &&
         bind(lib, "Highs_getDoubleInfoValue", sym.double_info) && bind(lib, "Highs_getIntInfoValue", sym.int_info) &&
         bind(lib, "Highs_setBoolOptionValue", sym.set_bool) && bind(lib, "Highs_setIntOptionValue", sym.set_int) &&
         bind(lib, "Highs_setDoubleOptionValue", sym.set_double) &&
         bind(lib, "Highs_setStringOptionValue", sym.set_string) &&
         bind(lib, "Highs_getSizeofHighsInt", sym.sizeof_int) && sym.sizeof_int() == sizeof(HInt);
  });
  return ok ? &sym : nullptr;
}

}  // namespace

struct HighsBackend::Api {
  const Symbols* s;
};

HighsBackend::HighsBackend() : api_(std::make_unique<Api>()) {
  api_->s = load_symbols();
  if (!api_->s) throw std::runtime_error("HiGHS library could not be loaded (set WILDGRID_HIGHS_LIBRARY)");
}

HighsBackend::~HighsBackend() = default;

bool HighsBackend::available() { return load_symbols() != nullptr; }

MilpSolution HighsBackend::solve(const MilpProblem& p, const SolveOptions& o) const {
  const Symbols& s = *api_->s;
  const HInt n = static_cast<HInt>(p.num_vars());
  const HInt m = static_cast<HInt>(p.num_rows());

  std::vector<HInt> start(static_cast<std::size_t>(n) + 1, 0);
  for (const Constraint& r : p.constraints())
    for (const Term& t : r.terms) ++start[static_cast<std::size_t>(t.var) + 1];
  for (HInt j = 0; j < n; ++j) start[j + 1] += start[j];
  std::vector<HInt> index(static_cast<std::size_t>(start[n]));
  std::vector<double> value(index.size());
  std::vector<HInt> fill(start.begin(), start.end() - 1);
  for (HInt r = 0; r < m; ++r) {
    for (const Term& t : p.constraints()[static_cast<std::size_t>(r)].terms) {
      const HInt k = fill[t.var]++;
      index[k] = r;
      value[k] = t.coef;
    }
  }
  std::vector<double> col_lo(n), col_hi(n), row_lo(m), row_hi(m);
  std::vector<HInt> integrality(n, 0);
  bool has_int = false;
  for (HInt j = 0; j < n; ++j) {
    const Variable& v = p.variables()[static_cast<std::size_t>(j)];
    col_lo[j] = v.lo;
    col_hi[j] = v.hi;
    if (v.kind == VarKind::Binary) {
      integrality[j] = 1;
      has_int = true;
    }
  }
  for (HInt r = 0; r < m; ++r) {
    row_lo[r] = p.constraints()[static_cast<std::size_t>(r)].lo;
    row_hi[r] = p.constraints()[static_cast<std::size_t>(r)].hi;
  }

  struct Handle {
    const Symbols& s;
    void* h;
    ~Handle() { s.destroy(h); }
  };

  auto run_once = [&](bool presolve, Handle& hd) {
    void* h = hd.h;
    s.set_bool(h, "output_flag", 0);
    s.set_int(h, "random_seed", static_cast<HInt>(o.seed % 2147483647ULL));
    s.set_int(h, "threads", 1);
    s.set_double(h, "mip_rel_gap", o.rel_gap);
    s.set_double(h, "mip_abs_gap", o.abs_gap);
    if (std::isfinite(o.time_limit_s)) s.set_double(h, "time_limit", o.time_limit_s);
    if (!presolve) s.set_string(h, "presolve", "off");
    const HInt sense = p.sense() == ObjSense::Maximize ? -1 : 1;
    s.pass_mip(h, n, m, static_cast<HInt>(index.size()), 1, sense, p.objective_constant(),
               p.objective_coefficients().data(), col_lo.data(), col_hi.data(), row_lo.data(), row_hi.data(),
               start.data(), index.data(), value.data(), has_int ? integrality.data() : nullptr);
    s.run(h);
    return s.model_status(h);
  };

  Handle hd{s, s.create()};
  HInt status = run_once(true, hd);
  if (status == kUnboundedOrInfeasible) {
    Handle retry{s, s.create()};
    status = run_once(false, retry);
    std::swap(hd.h, retry.h);
  }

  MilpSolution out;
  if (status == kInfeasible) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  if (status == kUnbounded || status == kUnboundedOrInfeasible) {
    out.status = SolveStatus::Unbounded;
    return out;
  }
  HInt primal_status = 0;
  s.int_info(hd.h, "primal_solution_status", &primal_status);
  if (primal_status != 2) {
    out.status = status == kOptimal ? SolveStatus::Infeasible : SolveStatus::IterationLimit;
    return out;
  }
  std::vector<double> x(static_cast<std::size_t>(n)), row(static_cast<std::size_t>(m));
  std::vector<double> cd(static_cast<std::size_t>(n)), rd(static_cast<std::size_t>(m));
  s.solution(hd.h, x.data(), cd.data(), row.data(), rd.data());
  std::vector<double> rounded = x;
  for (HInt j = 0; j < n; ++j)
    if (integrality[j]) rounded[static_cast<std::size_t>(j)] = std::round(x[static_cast<std::size_t>(j)]);
  if (p.max_violation(rounded) <= 1e-6) x = std::move(rounded);

  out.status = status == kOptimal ? SolveStatus::Optimal : SolveStatus::IterationLimit;
  out.values = std::move(x);
  out.objective = p.evaluate_objective(out.values);
  out.bound = out.objective;
  if (has_int) {
    double bound = 0.0;
    if (s.double_info(hd.h, "mip_dual_bound", &bound) == 0 && std::isfinite(bound)) out.bound = bound;
  }
  return out;
}

std::unique_ptr<SolverBackend> make_backend(const std::string& which) {
  if (which == "bundled") return std::make_unique<BranchAndBound>();
  if (which == "highs") return std::make_unique<HighsBackend>();
  if (which == "auto") {
    if (HighsBackend::available()) return std::make_unique<HighsBackend>();
    return std::make_unique<BranchAndBound>();
  }
  throw std::invalid_argument("unknown solver backend '" + which + "' (expected bundled, highs or auto)");
}

}  // namespace wildgrid::milp
