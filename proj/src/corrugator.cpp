#include "reelstock/corrugator.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "reelstock/simplex.hpp"

namespace reelstock {

WidthMm CorrugatorPattern::used_width(const std::vector<SheetOrder>& orders) const {
  WidthMm used = 0;
  for (std::size_t i = 0; i < lanes.size(); ++i) used += lanes[i] * orders[i].width;
  return used;
}

namespace {

struct LengthGroup {
  WidthMm length;
  std::vector<std::size_t> orders;
};

std::vector<LengthGroup> group_by_length(const std::vector<SheetOrder>& orders) {
  std::vector<LengthGroup> groups;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const LengthGroup& g) { return g.length == orders[i].length; });
    if (it == groups.end()) {
      groups.push_back({orders[i].length, {i}});
    } else {
      it->orders.push_back(i);
    }
  }
  std::sort(groups.begin(), groups.end(),
            [](const LengthGroup& a, const LengthGroup& b) { return a.length < b.length; });
  return groups;
}

class PatternEnumerator {
 public:
  PatternEnumerator(const std::vector<SheetOrder>& orders, const CorrugatorSpec& spec,
                    std::vector<CorrugatorPattern>& out)
      : orders_(orders), spec_(spec), out_(out) {}

  void run(WidthMm reel_width, const std::vector<const LengthGroup*>& groups) {
    reel_width_ = reel_width;
    capacity_ = reel_width - spec_.min_trim;
    members_.clear();
    group_of_.clear();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t i : groups[g]->orders) {
        members_.push_back(i);
        group_of_.push_back(g);
      }
    }
    group_count_ = groups.size();
    lanes_.assign(orders_.size(), 0);
    recurse(0, capacity_, 0);
  }

 private:
  void recurse(std::size_t k, WidthMm remaining, int lane_total) {
    if (k == members_.size()) {
      emit(remaining, lane_total);
      return;
    }
    const std::size_t order = members_[k];
    const WidthMm w = orders_[order].width;
    int max_count = remaining / w;
    if (spec_.max_lanes) max_count = std::min(max_count, *spec_.max_lanes - lane_total);
    for (int c = max_count; c >= 0; --c) {
      lanes_[order] = c;
      recurse(k + 1, remaining - c * w, lane_total + c);
    }
    lanes_[order] = 0;
  }

  void emit(WidthMm remaining, int lane_total) {
    std::vector<bool> used(group_count_, false);
    for (std::size_t k = 0; k < members_.size(); ++k) {
      if (lanes_[members_[k]] > 0) used[group_of_[k]] = true;
    }
    if (std::find(used.begin(), used.end(), false) != used.end()) return;
    const bool lanes_full = spec_.max_lanes && lane_total >= *spec_.max_lanes;
    if (!lanes_full) {
      for (std::size_t i : members_) {
        if (lanes_[i] > 0 && orders_[i].width <= remaining) return;
      }
    }
    out_.push_back(CorrugatorPattern{reel_width_, lanes_});
  }

  const std::vector<SheetOrder>& orders_;
  const CorrugatorSpec& spec_;
  std::vector<CorrugatorPattern>& out_;
  WidthMm reel_width_ = 0;
  WidthMm capacity_ = 0;
  std::vector<std::size_t> members_;
  std::vector<std::size_t> group_of_;
  std::size_t group_count_ = 0;
  std::vector<int> lanes_;
};

// Calls fn for every non-empty combination of at most max_size indices out of
// n, in lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t max_size, Fn fn) {
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (!pick.empty()) fn(pick);
    if (pick.size() == max_size) return;
    for (std::size_t i = start; i < n; ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace

std::vector<CorrugatorPattern> enumerate_corrugator_patterns(const CorrugatorInstance& instance,
                                                             const Policy& policy,
                                                             const CorrugatorSpec& spec) {
  const Policy usable = policy.filtered_to(spec.max_width);
  WidthMm narrowest = std::numeric_limits<WidthMm>::max();
  for (const auto& o : instance.orders) narrowest = std::min(narrowest, o.width);
  const bool any_fits = std::any_of(usable.widths().begin(), usable.widths().end(),
                                    [&](WidthMm w) { return w - spec.min_trim >= narrowest; });
  if (instance.orders.empty() || !any_fits) {
    throw UnservableError("instance '" + instance.id + "'",
                          "instance unservable: no usable width fits the narrowest order");
  }

  const auto groups = group_by_length(instance.orders);
  std::vector<CorrugatorPattern> patterns;
  PatternEnumerator enumerator(instance.orders, spec, patterns);
  for (WidthMm width : usable.widths()) {
    if (width - spec.min_trim < narrowest) continue;
    for_each_combination(groups.size(), static_cast<std::size_t>(spec.knife_count),
                         [&](const std::vector<std::size_t>& pick) {
                           std::vector<const LengthGroup*> chosen;
                           for (std::size_t g : pick) chosen.push_back(&groups[g]);
                           enumerator.run(width, chosen);
                         });
  }
  return patterns;
}

CorrugatorSolution solve_corrugator(const CorrugatorInstance& instance, const Policy& policy,
                                    const CorrugatorSpec& spec, double grammage) {
  const auto patterns = enumerate_corrugator_patterns(instance, policy, spec);
  const auto& orders = instance.orders;
  const std::size_t n_orders = orders.size();

  for (std::size_t i = 0; i < n_orders; ++i) {
    const bool covered = std::any_of(patterns.begin(), patterns.end(),
                                     [&](const CorrugatorPattern& p) { return p.lanes[i] > 0; });
    if (!covered) {
      throw UnservableError("instance '" + instance.id + "'",
                            "order " + std::to_string(i + 1) + " (width " + std::to_string(orders[i].width) +
                                ") fits no usable width");
    }
  }

  // Demand in lane-metres.
  std::vector<double> demand(n_orders);
  for (std::size_t i = 0; i < n_orders; ++i) {
    demand[i] = static_cast<double>(orders[i].quantity) * orders[i].length / 1000.0;
  }
  const WidthMm widest = patterns.back().reel_width;

  lp::Problem problem;
  std::vector<double> prefer_widest;
  for (const auto& p : patterns) {
    problem.add_variable(p.reel_width / 1000.0);
    prefer_widest.push_back(p.reel_width == widest ? -p.reel_width / 1000.0 : 0.0);
  }
  const double tol = spec.overrun_tolerance;
  std::vector<std::size_t> delivered_var(n_orders);
  if (tol > 0.0) {
    for (std::size_t i = 0; i < n_orders; ++i) {
      delivered_var[i] = problem.add_variable(-orders[i].width / 1000.0, 0.0, demand[i] * (1.0 + tol));
      prefer_widest.push_back(0.0);
    }
  }
  for (std::size_t i = 0; i < n_orders; ++i) {
    std::vector<lp::Term> terms;
    for (std::size_t p = 0; p < patterns.size(); ++p) {
      if (patterns[p].lanes[i] > 0) terms.push_back({p, static_cast<double>(patterns[p].lanes[i])});
    }
    problem.add_row(terms, demand[i], lp::kInfinity);
    if (tol > 0.0) {
      terms.push_back({delivered_var[i], -1.0});
      problem.add_row(std::move(terms), 0.0, lp::kInfinity);
    }
  }

  lp::Options options;
  options.tie_breakers.push_back(std::move(prefer_widest));
  const lp::Solution lp_solution = lp::solve(problem, options);
  if (lp_solution.status != lp::Status::optimal) {
    throw std::runtime_error("corrugator LP for instance '" + instance.id + "' did not reach optimality");
  }

  double total_demand = std::accumulate(demand.begin(), demand.end(), 0.0);
  const double prune = 1e-12 * std::max(1.0, total_demand);

  CorrugatorSolution sol;
  sol.grammage = grammage;
  std::vector<double> production(n_orders, 0.0);  // lane-metres
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    const double length = lp_solution.values[p];
    if (length <= prune) continue;
    const double area = patterns[p].reel_width / 1000.0 * length;
    const double trim = (patterns[p].reel_width - patterns[p].used_width(orders)) / 1000.0 * length;
    sol.runs.push_back(CorrugatorRun{patterns[p], length, trim});
    sol.consumed_area_m2 += area;
    sol.consumption[patterns[p].reel_width].area_m2 += area;
    sol.trim_area_m2 += trim;
    for (std::size_t i = 0; i < n_orders; ++i) production[i] += patterns[p].lanes[i] * length;
  }
  sol.produced_sheets.resize(n_orders);
  sol.overrun_area_by_order.assign(n_orders, 0.0);
  for (std::size_t i = 0; i < n_orders; ++i) {
    sol.produced_sheets[i] = production[i] * 1000.0 / orders[i].length;
    sol.net_area_m2 += orders[i].width / 1000.0 * demand[i];
    const double accepted = demand[i] * (1.0 + tol);
    if (production[i] > accepted) {
      sol.overrun_area_by_order[i] = orders[i].width / 1000.0 * (production[i] - accepted);
      sol.overrun_area_m2 += sol.overrun_area_by_order[i];
    }
  }
  sol.production_lane_m = std::move(production);
  sol.waste_area_m2 = sol.trim_area_m2 + sol.overrun_area_m2;
  sol.waste_mass_kg = sol.waste_area_m2 * grammage / 1000.0;
  sol.waste_fraction = sol.consumed_area_m2 > 0.0 ? sol.waste_area_m2 / sol.consumed_area_m2 : 0.0;
  for (auto& [width, c] : sol.consumption) c.mass_kg = c.area_m2 * grammage / 1000.0;
  return sol;
}

std::map<WidthMm, double> corrugator_waste_by_width(const CorrugatorSolution& solution) {
  const double kg_per_m2 = solution.grammage / 1000.0;
  std::map<WidthMm, double> out;
  for (const auto& run : solution.runs) {
    double waste_area = run.trim_area_m2;
    for (std::size_t i = 0; i < solution.overrun_area_by_order.size(); ++i) {
      const double overrun = solution.overrun_area_by_order[i];
      if (overrun <= 0.0 || run.pattern.lanes[i] == 0) continue;
      waste_area += overrun * run.pattern.lanes[i] * run.run_length_m / solution.production_lane_m[i];
    }
    out[run.pattern.reel_width] += waste_area * kg_per_m2;
  }
  return out;
}

}  // namespace reelstock
