#include "reelstock/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace reelstock::lp {

std::size_t Problem::add_variable(double cost, double lower, double upper) {
  if (!(lower <= upper)) throw std::invalid_argument("lp: variable lower bound exceeds upper bound");
  if (!std::isfinite(lower)) throw std::invalid_argument("lp: variable lower bound must be finite");
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  return cost_.size() - 1;
}

void Problem::add_row(std::vector<Term> terms, double lower, double upper) {
  if (!(lower <= upper)) throw std::invalid_argument("lp: row lower bound exceeds upper bound");
  for (const Term& t : terms) {
    if (t.var >= cost_.size()) throw std::out_of_range("lp: row references unknown variable");
  }
  rows_.push_back(Row{std::move(terms), lower, upper});
}

namespace {

constexpr double kPivotTol = 1e-11;
constexpr std::size_t kRefactorEvery = 50;

class Tableau {
 public:
  Tableau(const Problem& p, std::span<const double> lower, std::span<const double> upper)
      : m_(p.num_rows()), n_(p.num_variables()), cols_(n_ + m_) {
    a_.assign(m_ * cols_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      for (const Term& t : p.rows()[r].terms) a_[r * cols_ + t.var] += t.coef;
      a_[r * cols_ + n_ + r] = -1.0;
    }
    lb_.resize(cols_);
    ub_.resize(cols_);
    for (std::size_t j = 0; j < n_; ++j) {
      lb_[j] = lower[j];
      ub_[j] = upper[j];
    }
    for (std::size_t r = 0; r < m_; ++r) {
      lb_[n_ + r] = p.rows()[r].lower;
      ub_[n_ + r] = p.rows()[r].upper;
    }
    cost_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = p.cost()[j];
    double cmax = 0.0;
    for (double c : p.cost()) cmax = std::max(cmax, std::abs(c));
    dual_tol_ = 1e-9 * (1.0 + cmax);

    t_.assign(m_ * cols_, 0.0);
    x_.assign(cols_, 0.0);
    d_.assign(cols_, 0.0);
    at_upper_.assign(cols_, false);
    row_of_.assign(cols_, kNone);
    basic_.resize(m_);
  }

  void set_slack_basis() {
    std::fill(row_of_.begin(), row_of_.end(), kNone);
    for (std::size_t r = 0; r < m_; ++r) {
      basic_[r] = n_ + r;
      row_of_[n_ + r] = r;
    }
  }

  bool set_basis(const Basis& basis) {
    if (basis.basic.size() != m_) return false;
    std::fill(row_of_.begin(), row_of_.end(), kNone);
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t j = basis.basic[r];
      if (j >= cols_ || row_of_[j] != kNone) return false;
      basic_[r] = j;
      row_of_[j] = r;
    }
    return true;
  }

  // Rebuilds T = B^-1 A from the original matrix. Returns false when the
  // basis matrix is singular.
  bool refactor() {
    std::vector<double> b(m_ * m_), inv(m_ * m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t k = 0; k < m_; ++k) b[r * m_ + k] = a_[r * cols_ + basic_[k]];
      inv[r * m_ + r] = 1.0;
    }
    // Gauss-Jordan with partial pivoting. Column k of B corresponds to
    // basic_[k]; row swaps are applied to both B and its inverse.
    for (std::size_t k = 0; k < m_; ++k) {
      std::size_t piv = k;
      for (std::size_t r = k + 1; r < m_; ++r) {
        if (std::abs(b[r * m_ + k]) > std::abs(b[piv * m_ + k])) piv = r;
      }
      if (std::abs(b[piv * m_ + k]) < 1e-12) return false;
      if (piv != k) {
        for (std::size_t c = 0; c < m_; ++c) {
          std::swap(b[piv * m_ + c], b[k * m_ + c]);
          std::swap(inv[piv * m_ + c], inv[k * m_ + c]);
        }
      }
      const double diag = b[k * m_ + k];
      for (std::size_t c = 0; c < m_; ++c) {
        b[k * m_ + c] /= diag;
        inv[k * m_ + c] /= diag;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == k) continue;
        const double f = b[r * m_ + k];
        if (f == 0.0) continue;
        for (std::size_t c = 0; c < m_; ++c) {
          b[r * m_ + c] -= f * b[k * m_ + c];
          inv[r * m_ + c] -= f * inv[k * m_ + c];
        }
      }
    }
    // After elimination row k of inv maps to basic column k.
    std::fill(t_.begin(), t_.end(), 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      double* trow = &t_[r * cols_];
      for (std::size_t k = 0; k < m_; ++k) {
        const double f = inv[r * m_ + k];
        if (f == 0.0) continue;
        const double* arow = &a_[k * cols_];
        for (std::size_t j = 0; j < cols_; ++j) trow[j] += f * arow[j];
      }
    }
    // Clean the identity part exactly.
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t k = 0; k < m_; ++k) t_[r * cols_ + basic_[k]] = (r == k) ? 1.0 : 0.0;
    }
    return true;
  }

  void compute_duals() {
    for (std::size_t j = 0; j < cols_; ++j) d_[j] = cost_[j];
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = cost_[basic_[r]];
      if (cb == 0.0) continue;
      const double* trow = &t_[r * cols_];
      for (std::size_t j = 0; j < cols_; ++j) d_[j] -= cb * trow[j];
    }
    for (std::size_t r = 0; r < m_; ++r) d_[basic_[r]] = 0.0;
  }

  // Places every nonbasic variable on the bound that keeps it dual feasible.
  bool place_nonbasic_dual_feasible() {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (row_of_[j] != kNone) continue;
      if (d_[j] < -dual_tol_) {
        if (!std::isfinite(ub_[j])) return false;
        at_upper_[j] = true;
      } else if (d_[j] > dual_tol_) {
        if (!std::isfinite(lb_[j])) return false;
        at_upper_[j] = false;
      } else {
        at_upper_[j] = !std::isfinite(lb_[j]);
        if (at_upper_[j] && !std::isfinite(ub_[j])) return false;
      }
    }
    return true;
  }

  void compute_primal() {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (row_of_[j] == kNone) x_[j] = at_upper_[j] ? ub_[j] : lb_[j];
    }
    for (std::size_t r = 0; r < m_; ++r) {
      const double* trow = &t_[r * cols_];
      double v = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (row_of_[j] == kNone && x_[j] != 0.0) v -= trow[j] * x_[j];
      }
      x_[basic_[r]] = v;
    }
  }

  void pivot(std::size_t r, std::size_t q) {
    double* prow = &t_[r * cols_];
    const double alpha = prow[q];
    for (std::size_t j = 0; j < cols_; ++j) prow[j] /= alpha;
    prow[q] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * cols_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double dq = d_[q];
    if (dq != 0.0) {
      for (std::size_t j = 0; j < cols_; ++j) d_[j] -= dq * prow[j];
    }
    d_[q] = 0.0;
    const std::size_t leaving = basic_[r];
    row_of_[leaving] = kNone;
    basic_[r] = q;
    row_of_[q] = r;
  }

  bool fixed(std::size_t j) const { return lb_[j] == ub_[j]; }

  double primal_tol(double bound) const { return 1e-9 * (1.0 + std::abs(bound)); }

  Status dual_simplex(std::size_t& iterations, std::size_t limit) {
    std::size_t since_refactor = 0;
    for (;;) {
      compute_primal();
      // Leaving row: largest bound violation.
      std::size_t r = kNone;
      double worst = 0.0;
      bool below = false;
      for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t j = basic_[i];
        const double v = x_[j];
        if (v < lb_[j] - primal_tol(lb_[j])) {
          const double viol = lb_[j] - v;
          if (viol > worst) {
            worst = viol;
            r = i;
            below = true;
          }
        } else if (v > ub_[j] + primal_tol(ub_[j])) {
          const double viol = v - ub_[j];
          if (viol > worst) {
            worst = viol;
            r = i;
            below = false;
          }
        }
      }
      if (r == kNone) return Status::optimal;
      if (iterations >= limit) return Status::iteration_limit;

      const double* trow = &t_[r * cols_];
      std::size_t q = kNone;
      double best_ratio = kInfinity;
      double best_alpha = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (row_of_[j] != kNone || fixed(j)) continue;
        const double alpha = trow[j];
        if (std::abs(alpha) < kPivotTol) continue;
        // x_r moves by -alpha per unit increase of x_j.
        const bool can_increase = !at_upper_[j];
        const bool helps = below ? (can_increase ? alpha < 0.0 : alpha > 0.0)
                                 : (can_increase ? alpha > 0.0 : alpha < 0.0);
        if (!helps) continue;
        const double ratio = std::abs(d_[j]) / std::abs(alpha);
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && std::abs(alpha) > std::abs(best_alpha))) {
          best_ratio = ratio;
          best_alpha = alpha;
          q = j;
        }
      }
      if (q == kNone) return Status::infeasible;

      const std::size_t leaving = basic_[r];
      pivot(r, q);
      at_upper_[leaving] = !below;
      ++iterations;
      if (++since_refactor >= kRefactorEvery) {
        since_refactor = 0;
        if (!refactor()) return Status::iteration_limit;
        compute_duals();
      }
    }
  }

  Status primal_simplex(std::size_t& iterations, std::size_t limit) {
    std::size_t since_refactor = 0;
    std::size_t degenerate_run = 0;
    compute_primal();
    for (;;) {
      if (iterations >= limit) return Status::iteration_limit;
      const bool bland = degenerate_run > 50;
      std::size_t q = kNone;
      double best = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (row_of_[j] != kNone || fixed(j)) continue;
        const double dj = d_[j];
        const bool improving = at_upper_[j] ? dj > dual_tol_ : dj < -dual_tol_;
        if (!improving) continue;
        if (bland) {
          q = j;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          q = j;
        }
      }
      if (q == kNone) return Status::optimal;

      const double dir = at_upper_[q] ? -1.0 : 1.0;
      double step = ub_[q] - lb_[q];
      std::size_t r = kNone;
      bool leave_at_upper = false;
      for (std::size_t i = 0; i < m_; ++i) {
        const double rate = -t_[i * cols_ + q] * dir;
        if (std::abs(rate) < kPivotTol) continue;
        const std::size_t j = basic_[i];
        double t;
        bool to_upper;
        if (rate < 0.0) {
          if (!std::isfinite(lb_[j])) continue;
          t = (x_[j] - lb_[j]) / -rate;
          to_upper = false;
        } else {
          if (!std::isfinite(ub_[j])) continue;
          t = (ub_[j] - x_[j]) / rate;
          to_upper = true;
        }
        t = std::max(t, 0.0);
        if (t < step - 1e-12 || (r != kNone && t <= step + 1e-12 && j < basic_[r])) {
          step = t;
          r = i;
          leave_at_upper = to_upper;
        }
      }
      if (!std::isfinite(step)) return Status::unbounded;
      degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;
      if (r == kNone) {
        at_upper_[q] = !at_upper_[q];
      } else {
        const std::size_t leaving = basic_[r];
        pivot(r, q);
        at_upper_[leaving] = leave_at_upper;
      }
      ++iterations;
      if (++since_refactor >= kRefactorEvery) {
        since_refactor = 0;
        if (!refactor()) return Status::iteration_limit;
        compute_duals();
      }
      compute_primal();
    }
  }

  // Restricts the feasible set to the optimal face of the current objective.
  void fix_to_optimal_face() {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (row_of_[j] != kNone) continue;
      if (std::abs(d_[j]) > dual_tol_) {
        lb_[j] = ub_[j] = x_[j];
      }
    }
  }

  void set_objective(std::span<const double> structural_cost) {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    double cmax = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      cost_[j] = structural_cost[j];
      cmax = std::max(cmax, std::abs(cost_[j]));
    }
    dual_tol_ = 1e-9 * (1.0 + cmax);
  }

  std::vector<double> structural_values() const { return {x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_)}; }
  Basis basis() const { return Basis{basic_}; }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t m_;
  std::size_t n_;
  std::size_t cols_;
  std::vector<double> a_;  // m x cols, original system
  std::vector<double> t_;  // m x cols, B^-1 A
  std::vector<double> lb_, ub_, cost_, x_, d_;
  std::vector<bool> at_upper_;
  std::vector<std::size_t> row_of_;
  std::vector<std::size_t> basic_;
  double dual_tol_ = 1e-9;
};

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
  return solve(problem, problem.lower(), problem.upper(), options);
}

Solution solve(const Problem& problem, std::span<const double> lower, std::span<const double> upper,
               const Options& options) {
  const std::size_t n = problem.num_variables();
  if (lower.size() != n || upper.size() != n) throw std::invalid_argument("lp: bound vector size mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    if (lower[j] > upper[j]) {
      Solution s;
      s.status = Status::infeasible;
      return s;
    }
  }
  for (const auto& tb : options.tie_breakers) {
    if (tb.size() != n) throw std::invalid_argument("lp: tie-breaker size mismatch");
  }

  Tableau tab(problem, lower, upper);
  bool ready = false;
  if (options.warm_start && tab.set_basis(*options.warm_start)) {
    ready = tab.refactor();
  }
  if (!ready) {
    tab.set_slack_basis();
    if (!tab.refactor()) throw std::logic_error("lp: slack basis is singular");
  }
  tab.compute_duals();
  if (!tab.place_nonbasic_dual_feasible()) {
    throw std::invalid_argument("lp: a variable with negative cost needs a finite upper bound");
  }

  Solution sol;
  sol.status = tab.dual_simplex(sol.iterations, options.iteration_limit);
  if (sol.status != Status::optimal) return sol;

  for (const auto& tb : options.tie_breakers) {
    tab.compute_primal();
    tab.fix_to_optimal_face();
    tab.set_objective(tb);
    tab.compute_duals();
    sol.status = tab.primal_simplex(sol.iterations, options.iteration_limit);
    if (sol.status != Status::optimal) return sol;
  }

  // Final refactorisation limits accumulated drift; repair any residual
  // infeasibility with a few dual iterations.
  if (tab.refactor()) {
    tab.set_objective(problem.cost());
    tab.compute_duals();
    tab.compute_primal();
    if (options.tie_breakers.empty()) {
      sol.status = tab.dual_simplex(sol.iterations, options.iteration_limit);
      if (sol.status != Status::optimal) return sol;
    }
  }
  tab.compute_primal();
  sol.values = tab.structural_values();
  sol.basis = tab.basis();
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += problem.cost()[j] * sol.values[j];
  return sol;
}

}  // namespace reelstock::lp
