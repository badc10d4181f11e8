#include "reelstock/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace reelstock::oracle {

namespace {

// Advances counts like an odometer with per-digit limits; false after the last.
bool next_counts(std::vector<int>& counts, const std::vector<int>& limits) {
  for (std::size_t d = 0; d < counts.size(); ++d) {
    if (counts[d] < limits[d]) {
      ++counts[d];
      return true;
    }
    counts[d] = 0;
  }
  return false;
}

// Solves the square system in place; false when singular.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
  const std::size_t m = b.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-12) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.resize(m);
  for (std::size_t r = 0; r < m; ++r) x[r] = b[r] / a[r][r];
  return true;
}

}  // namespace

CorrugatorOptimum brute_force_corrugator(const CorrugatorInstance& instance, const Policy& policy,
                                         const CorrugatorSpec& spec) {
  const auto& orders = instance.orders;
  const std::size_t m = orders.size();
  std::vector<WidthMm> widths;
  for (WidthMm w : policy.widths()) {
    if (w <= spec.max_width) widths.push_back(w);
  }
  if (m == 0 || m > kMaxCorrugatorOrders) throw OracleLimitError("corrugator oracle: 1 to 3 orders supported");
  if (widths.size() > kMaxCorrugatorWidths) throw OracleLimitError("corrugator oracle: at most 2 usable widths");
  if (spec.overrun_tolerance != 0.0) throw OracleLimitError("corrugator oracle: overrun tolerance must be 0");

  // Columns: cost and coverage per order.
  std::vector<double> cost;
  std::vector<std::vector<double>> cover;
  for (WidthMm w : widths) {
    const WidthMm room = w - spec.min_trim;
    std::vector<int> limits(m), counts(m, 0);
    for (std::size_t i = 0; i < m; ++i) limits[i] = std::max(0, room / orders[i].width);
    while (next_counts(counts, limits)) {
      WidthMm used = 0;
      int lanes = 0;
      std::set<WidthMm> lengths;
      for (std::size_t i = 0; i < m; ++i) {
        used += counts[i] * orders[i].width;
        lanes += counts[i];
        if (counts[i] > 0) lengths.insert(orders[i].length);
      }
      if (used > room) continue;
      if (spec.max_lanes && lanes > *spec.max_lanes) continue;
      if (static_cast<int>(lengths.size()) > spec.knife_count) continue;
      cost.push_back(w / 1000.0);
      cover.emplace_back(counts.begin(), counts.end());
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    cost.push_back(0.0);
    std::vector<double> surplus(m, 0.0);
    surplus[i] = -1.0;
    cover.push_back(std::move(surplus));
  }

  std::vector<double> demand(m);
  double net = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    demand[i] = static_cast<double>(orders[i].quantity) * orders[i].length / 1000.0;
    net += orders[i].width / 1000.0 * demand[i];
  }

  const double slack = 1e-9 * (1.0 + *std::max_element(demand.begin(), demand.end()));
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n_cols = cost.size();
  std::vector<std::size_t> pick(m);
  auto rec = [&](auto&& self, std::size_t k, std::size_t start) -> void {
    if (k == m) {
      std::vector<std::vector<double>> a(m, std::vector<double>(m));
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) a[r][c] = cover[pick[c]][r];
      }
      std::vector<double> x;
      if (!solve_square(a, demand, x)) return;
      double obj = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        if (x[c] < -slack) return;
        obj += cost[pick[c]] * x[c];
      }
      best = std::min(best, obj);
      return;
    }
    for (std::size_t c = start; c < n_cols; ++c) {
      pick[k] = c;
      self(self, k + 1, c + 1);
    }
  };
  rec(rec, 0, 0);

  if (!std::isfinite(best)) {
    throw UnservableError("instance '" + instance.id + "'", "no combination of patterns covers the orders");
  }
  return CorrugatorOptimum{best, best - net};
}

MillOptimum brute_force_mill(std::span<const ReelDemandItem> items, const PaperMachineSpec& machine,
                             double tolerance_up, const ReelStandard& standard) {
  const std::size_t n = items.size();
  if (n == 0 || n > kMaxMillItems) throw OracleLimitError("mill oracle: 1 to 4 items supported");
  const WidthMm deckle = machine.deckle_width;
  std::vector<int> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (items[i].quantity_reels < 1 || items[i].quantity_reels > kMaxMillReels) {
      throw OracleLimitError("mill oracle: 1 to 6 reels per item supported");
    }
    if (items[i].width > deckle) {
      throw UnservableError("width " + std::to_string(items[i].width), "wider than the deckle");
    }
    lo[i] = static_cast<int>(items[i].quantity_reels);
    hi[i] = static_cast<int>(std::floor(static_cast<double>(lo[i]) * (1.0 + tolerance_up) + 1e-9));
  }

  struct Column {
    std::vector<int> lanes;
    std::int64_t trim;
  };
  std::vector<Column> columns;
  {
    std::vector<int> limits(n), counts(n, 0);
    for (std::size_t i = 0; i < n; ++i) limits[i] = std::min(hi[i], deckle / items[i].width);
    while (next_counts(counts, limits)) {
      WidthMm used = 0;
      int reels = 0;
      for (std::size_t i = 0; i < n; ++i) {
        used += counts[i] * items[i].width;
        reels += counts[i];
      }
      if (used > deckle) continue;
      if (machine.max_reels_per_pattern && reels > *machine.max_reels_per_pattern) continue;
      columns.push_back(Column{counts, deckle - used});
    }
  }

  // State: produced reels per item in mixed radix (hi + 1).
  std::vector<std::size_t> radix(n);
  std::size_t states = 1;
  for (std::size_t i = 0; i < n; ++i) {
    radix[i] = states;
    states *= static_cast<std::size_t>(hi[i] + 1);
  }
  constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::max();
  std::vector<std::pair<std::int64_t, std::int64_t>> best(states, {kNone, kNone});
  best[0] = {0, 0};
  std::vector<int> produced(n);
  for (std::size_t s = 1; s < states; ++s) {
    for (std::size_t i = 0; i < n; ++i) produced[i] = static_cast<int>(s / radix[i] % (hi[i] + 1));
    for (const auto& col : columns) {
      std::size_t prev = s;
      bool fits = true;
      for (std::size_t i = 0; i < n && fits; ++i) {
        fits = col.lanes[i] <= produced[i];
        prev -= static_cast<std::size_t>(col.lanes[i]) * radix[i];
      }
      if (!fits || best[prev].first == kNone) continue;
      const std::pair<std::int64_t, std::int64_t> cand{best[prev].first + col.trim, best[prev].second + 1};
      best[s] = std::min(best[s], cand);
    }
  }

  std::pair<std::int64_t, std::int64_t> answer{kNone, kNone};
  for (std::size_t s = 0; s < states; ++s) {
    bool inside = true;
    for (std::size_t i = 0; i < n && inside; ++i) inside = static_cast<int>(s / radix[i] % (hi[i] + 1)) >= lo[i];
    if (inside) answer = std::min(answer, best[s]);
  }
  if (answer.first == kNone) {
    throw UnservableError("machine '" + machine.id + "'", "no run vector meets the demand bands");
  }
  MillOptimum out;
  out.trim_mm = answer.first;
  out.runs = answer.second;
  out.waste_kg = static_cast<double>(answer.first) * standard.kg_per_mm_per_reel;
  out.production_kg = static_cast<double>(answer.second * deckle) * standard.kg_per_mm_per_reel;
  return out;
}

PolicyOptimum brute_force_policy(const Scenario& scenario, std::span<const WidthMm> grid, std::size_t cardinality,
                                 const EvaluateOptions& options) {
  std::vector<WidthMm> values(grid.begin(), grid.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.size() > kMaxPolicyGrid) throw OracleLimitError("policy oracle: at most 8 grid values");
  if (cardinality < 1 || cardinality > kMaxPolicyCardinality || cardinality > values.size()) {
    throw OracleLimitError("policy oracle: cardinality must be 1 to 3 and fit the grid");
  }

  PolicyOptimum out;
  out.z = std::numeric_limits<double>::infinity();
  std::vector<WidthMm> pick;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (pick.size() == cardinality) {
      Policy p(pick);
      ++out.evaluated;
      try {
        const double z = evaluate_policy(p, scenario, options).z;
        if (z < out.z) {
          out.z = z;
          out.policy = p;
        }
      } catch (const UnservableError&) {
        ++out.unservable;
      }
      return;
    }
    for (std::size_t i = start; i < values.size(); ++i) {
      pick.push_back(values[i]);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  if (!std::isfinite(out.z)) throw UnservableError("policy grid", "no policy of this cardinality serves the scenario");
  return out;
}

}  // namespace reelstock::oracle
