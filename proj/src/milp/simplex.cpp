#include "wildgrid/milp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wildgrid::milp {

namespace {
constexpr int kRefactorEvery = 64;
constexpr double kPivotTol = 1e-9;
constexpr double kSingularTol = 1e-11;
constexpr int kDegenerateBeforeBland = 60;
}  // namespace

DenseSimplex::DenseSimplex(const MilpProblem& p) {
  n_ = static_cast<int>(p.num_vars());
  m_ = static_cast<int>(p.num_rows());
  const int N = n_ + m_;

  std::vector<int> count(static_cast<std::size_t>(n_) + 1, 0);
  for (const Constraint& r : p.constraints())
    for (const Term& t : r.terms) ++count[static_cast<std::size_t>(t.var) + 1];
  col_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + count[j + 1];
  col_index_.resize(static_cast<std::size_t>(col_start_[n_]));
  col_value_.resize(col_index_.size());
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int r = 0; r < m_; ++r) {
    for (const Term& t : p.constraints()[static_cast<std::size_t>(r)].terms) {
      const int k = fill[t.var]++;
      col_index_[k] = r;
      col_value_[k] = t.coef;
    }
  }

  sign_ = p.sense() == ObjSense::Maximize ? -1.0 : 1.0;
  cost_.assign(static_cast<std::size_t>(N), 0.0);
  double cmax = 0.0;
  for (int j = 0; j < n_; ++j) {
    cost_[j] = sign_ * p.objective_coefficients()[static_cast<std::size_t>(j)];
    cmax = std::max(cmax, std::abs(cost_[j]));
  }
  cost_const_ = p.objective_constant();
  dual_tol_ = 1e-9 * std::max(1.0, cmax);

  base_lo_.resize(static_cast<std::size_t>(N));
  base_hi_.resize(static_cast<std::size_t>(N));
  for (int j = 0; j < n_; ++j) {
    base_lo_[j] = p.variables()[static_cast<std::size_t>(j)].lo;
    base_hi_[j] = p.variables()[static_cast<std::size_t>(j)].hi;
  }
  for (int r = 0; r < m_; ++r) {
    base_lo_[n_ + r] = p.constraints()[static_cast<std::size_t>(r)].lo;
    base_hi_[n_ + r] = p.constraints()[static_cast<std::size_t>(r)].hi;
  }
  lo_ = base_lo_;
  hi_ = base_hi_;
  x_.assign(static_cast<std::size_t>(N), 0.0);
  state_.assign(static_cast<std::size_t>(N), AtLower);
  head_.assign(static_cast<std::size_t>(m_), 0);
  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
}

void DenseSimplex::set_bounds(int var, double lo, double hi) {
  if (var < 0 || var >= n_) throw std::out_of_range("DenseSimplex::set_bounds");
  lo_[var] = lo;
  hi_[var] = hi;
}

void DenseSimplex::reset_bounds() {
  lo_ = base_lo_;
  hi_ = base_hi_;
}

template <class F>
void DenseSimplex::for_column(int j, F&& f) const {
  if (j < n_) {
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) f(col_index_[k], col_value_[k]);
  } else {
    f(j - n_, -1.0);
  }
}

DenseSimplex::State DenseSimplex::default_state(int j) const {
  if (std::isfinite(lo_[j])) return AtLower;
  if (std::isfinite(hi_[j])) return AtUpper;
  return FreeZero;
}

double DenseSimplex::nonbasic_value(int j) const {
  switch (state_[j]) {
    case AtLower:
      return lo_[j];
    case AtUpper:
      return hi_[j];
    default:
      return 0.0;
  }
}

void DenseSimplex::cold_basis() {
  const int N = n_ + m_;
  for (int j = 0; j < N; ++j) state_[j] = default_state(j);
  for (int r = 0; r < m_; ++r) {
    head_[r] = n_ + r;
    state_[n_ + r] = Basic;
  }
  std::fill(binv_.begin(), binv_.end(), 0.0);
  for (int r = 0; r < m_; ++r) binv_[static_cast<std::size_t>(r) * m_ + r] = -1.0;
  since_refactor_ = 0;
}

void DenseSimplex::load_basis(const LpBasis& b) {
  const int N = n_ + m_;
  if (static_cast<int>(b.basic.size()) != m_ || static_cast<int>(b.state.size()) != N) {
    cold_basis();
    return;
  }
  for (int j = 0; j < N; ++j) {
    State s = static_cast<State>(b.state[j]);
    if (s == AtLower && !std::isfinite(lo_[j])) s = default_state(j);
    if (s == AtUpper && !std::isfinite(hi_[j])) s = default_state(j);
    if (s == FreeZero && (std::isfinite(lo_[j]) || std::isfinite(hi_[j]))) s = default_state(j);
    state_[j] = s;
  }
  head_ = b.basic;
  for (int r = 0; r < m_; ++r) state_[head_[r]] = Basic;
  if (!refactor()) cold_basis();
}

LpBasis DenseSimplex::basis() const {
  LpBasis b;
  b.basic = head_;
  b.state.assign(state_.begin(), state_.end());
  return b;
}

// Gauss-Jordan inversion of the basis matrix. Structurally dependent basic
// columns are swapped for row logicals; the displaced variable becomes
// nonbasic at a bound.
bool DenseSimplex::refactor() {
  const std::size_t m = static_cast<std::size_t>(m_);
  std::vector<double> a(m * m, 0.0);
  for (int k = 0; k < m_; ++k) for_column(head_[k], [&](int r, double v) { a[static_cast<std::size_t>(r) * m + k] = v; });
  std::vector<double>& inv = binv_;
  std::fill(inv.begin(), inv.end(), 0.0);
  for (std::size_t r = 0; r < m; ++r) inv[r * m + r] = 1.0;

  std::vector<char> is_basic(static_cast<std::size_t>(n_ + m_), 0);
  for (int k = 0; k < m_; ++k) is_basic[static_cast<std::size_t>(head_[k])] = 1;

  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    double best = std::abs(a[k * m + k]);
    for (std::size_t r = k + 1; r < m; ++r) {
      if (std::abs(a[r * m + k]) > best) {
        best = std::abs(a[r * m + k]);
        piv = r;
      }
    }
    if (best < kSingularTol) {
      // Replace basic column k by the logical whose transformed column has
      // the largest entry among unpivoted rows.
      int choice = -1;
      double cbest = 0.0;
      std::size_t crow = k;
      for (int o = 0; o < m_; ++o) {
        if (is_basic[static_cast<std::size_t>(n_ + o)]) continue;
        for (std::size_t r = k; r < m; ++r) {
          const double v = std::abs(inv[r * m + static_cast<std::size_t>(o)]);
          if (v > cbest) {
            cbest = v;
            choice = o;
            crow = r;
          }
        }
      }
      if (choice < 0 || cbest < kSingularTol) return false;
      const int old = head_[k];
      is_basic[static_cast<std::size_t>(old)] = 0;
      state_[old] = default_state(old);
      head_[k] = n_ + choice;
      is_basic[static_cast<std::size_t>(n_ + choice)] = 1;
      state_[n_ + choice] = Basic;
      for (std::size_t r = 0; r < m; ++r) a[r * m + k] = -inv[r * m + static_cast<std::size_t>(choice)];
      piv = crow;
    }
    if (piv != k) {
      for (std::size_t c = 0; c < m; ++c) {
        std::swap(a[k * m + c], a[piv * m + c]);
        std::swap(inv[k * m + c], inv[piv * m + c]);
      }
    }
    const double d = a[k * m + k];
    for (std::size_t c = 0; c < m; ++c) {
      a[k * m + c] /= d;
      inv[k * m + c] /= d;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == k) continue;
      const double f = a[r * m + k];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < m; ++c) {
        a[r * m + c] -= f * a[k * m + c];
        inv[r * m + c] -= f * inv[k * m + c];
      }
    }
  }
  since_refactor_ = 0;
  return true;
}

void DenseSimplex::compute_basic_values() {
  const std::size_t m = static_cast<std::size_t>(m_);
  std::vector<double> w(m, 0.0);
  const int N = n_ + m_;
  for (int j = 0; j < N; ++j) {
    if (state_[j] == Basic) continue;
    const double v = nonbasic_value(j);
    x_[j] = v;
    if (v != 0.0) for_column(j, [&](int r, double a) { w[static_cast<std::size_t>(r)] += a * v; });
  }
  for (std::size_t r = 0; r < m; ++r) {
    double s = 0.0;
    const double* row = &binv_[r * m];
    for (std::size_t k = 0; k < m; ++k) s += row[k] * w[k];
    x_[head_[r]] = -s;
  }
}

LpStatus DenseSimplex::solve(const LpBasis* warm) {
  iterations_ = 0;
  iteration_limit_ = 50L * (n_ + m_) + 20000;
  if (warm)
    load_basis(*warm);
  else
    cold_basis();
  // Nonbasic variables whose stored state no longer matches their bounds.
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] != Basic && state_[j] == FreeZero && (std::isfinite(lo_[j]) || std::isfinite(hi_[j])))
      state_[j] = default_state(j);
  }
  compute_basic_values();
  for (int attempt = 0; attempt < 4; ++attempt) {
    const LpStatus st = iterate();
    if (st != LpStatus::Optimal) return st;
    // Verify after a fresh factorization.
    if (!refactor()) return LpStatus::IterationLimit;
    compute_basic_values();
    bool ok = true;
    for (int r = 0; r < m_ && ok; ++r) {
      const int j = head_[r];
      if (x_[j] < lo_[j] - 10 * feas_tol(lo_[j]) || x_[j] > hi_[j] + 10 * feas_tol(hi_[j])) ok = false;
    }
    if (ok) return LpStatus::Optimal;
  }
  return LpStatus::IterationLimit;
}

LpStatus DenseSimplex::iterate() {
  const std::size_t m = static_cast<std::size_t>(m_);
  const int N = n_ + m_;
  std::vector<double> cb(m), y(m), alpha(m);
  int degenerate_run = 0;
  bool bland = false;

  for (;;) {
    if (iterations_ >= iteration_limit_) return LpStatus::IterationLimit;
    if (since_refactor_ >= kRefactorEvery) {
      if (!refactor()) return LpStatus::IterationLimit;
      compute_basic_values();
    }

    bool phase1 = false;
    for (std::size_t r = 0; r < m; ++r) {
      const int j = head_[r];
      const double v = x_[j];
      if (v < lo_[j] - feas_tol(lo_[j])) {
        cb[r] = -1.0;
        phase1 = true;
      } else if (v > hi_[j] + feas_tol(hi_[j])) {
        cb[r] = 1.0;
        phase1 = true;
      } else {
        cb[r] = 0.0;
      }
    }
    if (!phase1)
      for (std::size_t r = 0; r < m; ++r) cb[r] = cost_[head_[r]];

    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      const double c = cb[r];
      if (c == 0.0) continue;
      const double* row = &binv_[r * m];
      for (std::size_t k = 0; k < m; ++k) y[k] += c * row[k];
    }

    const double dtol = phase1 ? 1e-9 : dual_tol_;
    int q = -1, dir = 0;
    double best = 0.0;
    for (int j = 0; j < N; ++j) {
      const State s = state_[j];
      if (s == Basic || lo_[j] == hi_[j]) continue;
      double d = phase1 ? 0.0 : cost_[j];
      for_column(j, [&](int r, double a) { d -= y[static_cast<std::size_t>(r)] * a; });
      int dj = 0;
      if (s == AtLower && d < -dtol)
        dj = 1;
      else if (s == AtUpper && d > dtol)
        dj = -1;
      else if (s == FreeZero && std::abs(d) > dtol)
        dj = d < 0 ? 1 : -1;
      if (!dj) continue;
      if (bland) {
        q = j;
        dir = dj;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        dir = dj;
      }
    }
    if (q < 0) return phase1 ? LpStatus::Infeasible : LpStatus::Optimal;

    std::fill(alpha.begin(), alpha.end(), 0.0);
    for_column(q, [&](int k, double a) {
      for (std::size_t r = 0; r < m; ++r) alpha[r] += binv_[r * m + static_cast<std::size_t>(k)] * a;
    });

    // Ratio test. rate_r is d x_B[r] / dt for the entering move.
    const double flip = (std::isfinite(lo_[q]) && std::isfinite(hi_[q])) ? hi_[q] - lo_[q] : kInf;
    auto limit = [&](std::size_t r, double slack_tol, bool& to_upper) -> double {
      const double a = alpha[r];
      if (std::abs(a) < kPivotTol) return kInf;
      const double rate = -dir * a;
      const int j = head_[r];
      const double v = x_[j];
      if (rate < 0) {
        if (phase1 && v > hi_[j] + feas_tol(hi_[j])) {
          to_upper = true;
          return (v - hi_[j] + slack_tol) / -rate;
        }
        if (!std::isfinite(lo_[j]) || v < lo_[j] - feas_tol(lo_[j])) return kInf;
        to_upper = false;
        return (v - lo_[j] + slack_tol) / -rate;
      }
      if (phase1 && v < lo_[j] - feas_tol(lo_[j])) {
        to_upper = false;
        return (lo_[j] - v + slack_tol) / rate;
      }
      if (!std::isfinite(hi_[j]) || v > hi_[j] + feas_tol(hi_[j])) return kInf;
      to_upper = true;
      return (hi_[j] - v + slack_tol) / rate;
    };

    int leave = -1;
    bool leave_to_upper = false;
    double step = kInf;
    if (bland) {
      int leave_var = -1;
      for (std::size_t r = 0; r < m; ++r) {
        bool up = false;
        const double t = limit(r, 0.0, up);
        if (!std::isfinite(t)) continue;
        if (t < step - 1e-12 || (t <= step + 1e-12 && head_[r] < leave_var)) {
          step = t;
          leave = static_cast<int>(r);
          leave_var = head_[r];
          leave_to_upper = up;
        }
      }
    } else {
      double tmax = kInf;
      for (std::size_t r = 0; r < m; ++r) {
        bool up = false;
        const int j = head_[r];
        const double scale = std::max(std::isfinite(lo_[j]) ? std::abs(lo_[j]) : 0.0,
                                      std::isfinite(hi_[j]) ? std::abs(hi_[j]) : 0.0);
        tmax = std::min(tmax, limit(r, feas_tol(scale), up));
      }
      if (std::isfinite(tmax)) {
        double best_alpha = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          bool up = false;
          const double t = limit(r, 0.0, up);
          if (t <= tmax && std::abs(alpha[r]) > best_alpha) {
            best_alpha = std::abs(alpha[r]);
            step = t;
            leave = static_cast<int>(r);
            leave_to_upper = up;
          }
        }
      }
    }
    if (step < 0.0) step = 0.0;

    const bool do_flip = std::isfinite(flip) && (flip <= step || leave < 0);
    if (leave < 0 && !do_flip) {
      return phase1 ? LpStatus::IterationLimit : LpStatus::Unbounded;
    }
    if (do_flip) step = flip;

    ++iterations_;
    double max_move = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double delta = -dir * alpha[r] * step;
      x_[head_[r]] += delta;
      max_move = std::max(max_move, std::abs(delta));
    }
    if (do_flip) {
      state_[q] = (dir > 0) ? AtUpper : AtLower;
      x_[q] = nonbasic_value(q);
    } else {
      x_[q] += dir * step;
      const int out = head_[leave];
      state_[out] = leave_to_upper ? AtUpper : AtLower;
      x_[out] = leave_to_upper ? hi_[out] : lo_[out];
      // Pivot the inverse on (leave, alpha).
      const std::size_t lr = static_cast<std::size_t>(leave);
      const double piv = alpha[lr];
      double* prow = &binv_[lr * m];
      for (std::size_t k = 0; k < m; ++k) prow[k] /= piv;
      for (std::size_t r = 0; r < m; ++r) {
        if (r == lr) continue;
        const double f = alpha[r];
        if (f == 0.0) continue;
        double* row = &binv_[r * m];
        for (std::size_t k = 0; k < m; ++k) row[k] -= f * prow[k];
      }
      head_[lr] = q;
      state_[q] = Basic;
      ++since_refactor_;
    }

    if (step * std::max(1.0, max_move) < 1e-12 || step < 1e-12) {
      if (++degenerate_run > kDegenerateBeforeBland) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
}

double DenseSimplex::objective() const {
  double v = 0.0;
  for (int j = 0; j < n_; ++j) v += cost_[j] * x_[j];
  return sign_ * v + cost_const_;
}

std::vector<double> DenseSimplex::primal() const { return {x_.begin(), x_.begin() + n_}; }

}  // namespace wildgrid::milp
