#pragma once

// Dense bounded-variable simplex for the small linear programs that arise in
// pattern-based cutting-stock models (tens of rows, up to a few thousand
// columns).
//
// Every row r carries an implicit slack s_r = a_r . x with bounds
// [row_lower, row_upper], so the working system is A x - s = 0 with all
// variables boxed. The primary objective is solved with the dual simplex from
// a slack (or warm-started) basis; optional tie-breaking objectives are then
// optimised lexicographically with the primal simplex over the optimal face.
//
// Restriction: a structural variable whose cost is negative must have a finite
// upper bound (the dual simplex starts with it there).

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace reelstock::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Term {
  std::size_t var;
  double coef;
};

struct Row {
  std::vector<Term> terms;
  double lower;
  double upper;
};

class Problem {
 public:
  std::size_t add_variable(double cost, double lower = 0.0, double upper = kInfinity);
  void add_row(std::vector<Term> terms, double lower, double upper);
  void set_cost(std::size_t var, double cost) { cost_.at(var) = cost; }

  std::size_t num_variables() const noexcept { return cost_.size(); }
  std::size_t num_rows() const noexcept { return rows_.size(); }

  std::span<const double> cost() const noexcept { return cost_; }
  std::span<const double> lower() const noexcept { return lower_; }
  std::span<const double> upper() const noexcept { return upper_; }
  std::span<const Row> rows() const noexcept { return rows_; }

 private:
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Row> rows_;
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

/// Basic column indices (structural j in [0, n), slack of row r is n + r).
struct Basis {
  std::vector<std::size_t> basic;
};

struct Solution {
  Status status = Status::infeasible;
  double objective = 0.0;       // primary objective at the returned point
  std::vector<double> values;   // structural variables
  Basis basis;
  std::size_t iterations = 0;
};

struct Options {
  /// Secondary objectives over structural variables, applied in order among
  /// the optima of all previous objectives.
  std::vector<std::vector<double>> tie_breakers;
  const Basis* warm_start = nullptr;
  std::size_t iteration_limit = 200000;
};

Solution solve(const Problem& problem, const Options& options = {});

/// Same as solve() with the structural bounds replaced (branch-and-bound).
Solution solve(const Problem& problem, std::span<const double> lower, std::span<const double> upper,
               const Options& options = {});

}  // namespace reelstock::lp
