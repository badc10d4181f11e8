#include "reelstock/papermill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>
#include <string>

#include "reelstock/simplex.hpp"

namespace reelstock {

bool ReelDemandItem::eligible_on(std::size_t machine) const {
  return eligible_machines.empty() ||
         std::find(eligible_machines.begin(), eligible_machines.end(), machine) != eligible_machines.end();
}

std::int64_t reel_band_upper(std::int64_t quantity, double tolerance_up) {
  return static_cast<std::int64_t>(std::floor(static_cast<double>(quantity) * (1.0 + tolerance_up) + 1e-9));
}

namespace {

void enumerate_on_machine(std::span<const ReelDemandItem> items, const PaperMachineSpec& machine,
                          std::size_t machine_index, PatternScope scope, std::vector<DecklePattern>& out) {
  std::vector<std::size_t> members;
  WidthMm narrowest = std::numeric_limits<WidthMm>::max();
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].eligible_on(machine_index) && items[i].width <= machine.deckle_width) {
      members.push_back(i);
      narrowest = std::min(narrowest, items[i].width);
    }
  }
  if (members.empty()) return;
  const int max_reels = machine.max_reels_per_pattern.value_or(std::numeric_limits<int>::max());

  std::vector<int> lanes(items.size(), 0);
  auto rec = [&](auto&& self, std::size_t k, WidthMm remaining, int reels) -> void {
    if (k == members.size()) {
      if (reels == 0) return;
      if (scope == PatternScope::maximal && reels < max_reels && remaining >= narrowest) return;
      out.push_back(DecklePattern{machine_index, lanes, machine.deckle_width - remaining});
      return;
    }
    const std::size_t item = members[k];
    const WidthMm w = items[item].width;
    const int most = std::min<int>(remaining / w, max_reels - reels);
    for (int c = most; c >= 0; --c) {
      lanes[item] = c;
      self(self, k + 1, remaining - c * w, reels + c);
    }
    lanes[item] = 0;
  };
  rec(rec, 0, machine.deckle_width, 0);
}

struct BoundChange {
  std::size_t var;
  double lower;
  double upper;
};

struct Node {
  double bound;
  std::size_t depth;
  std::size_t seq;
  std::vector<BoundChange> changes;
  lp::Basis basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq > b.seq;
  }
};

// Integer minimisation of an LP whose optimal integer objective values are
// multiples of `granularity`. Best-first with a dive after each branching.
// Variables from `branch_first` on are branched on before the others.
// Returns false when the node budget ran out.
class BranchAndBound {
 public:
  BranchAndBound(const lp::Problem& problem, double granularity, std::size_t branch_first,
                 std::size_t node_limit)
      : problem_(problem), granularity_(granularity), branch_first_(branch_first), node_limit_(node_limit) {}

  void set_incumbent(std::vector<std::int64_t> x) {
    objective_ = objective_of(x);
    incumbent_ = std::move(x);
  }
  const std::vector<std::int64_t>& incumbent() const { return incumbent_; }
  double objective() const { return objective_; }
  std::size_t nodes() const { return nodes_; }

  bool run() {
    const std::vector<double> root_lower(problem_.lower().begin(), problem_.lower().end());
    const std::vector<double> root_upper(problem_.upper().begin(), problem_.upper().end());
    std::vector<double> lower, upper;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::optional<Node> current = Node{-lp::kInfinity, 0, 0, {}, {}};
    std::size_t seq = 1;
    bool complete = true;

    while (current || !open.empty()) {
      if (!current) {
        current = open.top();
        open.pop();
      }
      Node node = std::move(*current);
      current.reset();
      if (node.bound > prune_level()) continue;
      if (nodes_ >= node_limit_) return false;
      ++nodes_;

      lower = root_lower;
      upper = root_upper;
      for (const auto& c : node.changes) {
        lower[c.var] = c.lower;
        upper[c.var] = c.upper;
      }
      lp::Options lp_options;
      if (!node.basis.basic.empty()) lp_options.warm_start = &node.basis;
      const lp::Solution relax = lp::solve(problem_, lower, upper, lp_options);
      if (relax.status == lp::Status::infeasible) continue;
      if (relax.status != lp::Status::optimal) {
        complete = false;
        continue;
      }
      if (relax.objective > prune_level()) continue;

      std::size_t branch = most_fractional(relax.values, branch_first_, problem_.num_variables());
      if (branch == relax.values.size()) branch = most_fractional(relax.values, 0, branch_first_);
      if (branch == relax.values.size()) {
        std::vector<std::int64_t> x(problem_.num_variables());
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::llround(relax.values[j]);
        if (satisfies_rows(x) && objective_of(x) < objective_) set_incumbent(std::move(x));
        continue;
      }

      const double v = relax.values[branch];
      Node down{relax.objective, node.depth + 1, seq++, node.changes, relax.basis};
      down.changes.push_back({branch, lower[branch], std::floor(v)});
      Node up{relax.objective, node.depth + 1, seq++, std::move(node.changes), relax.basis};
      up.changes.push_back({branch, std::ceil(v), upper[branch]});
      if (v - std::floor(v) >= 0.5) {
        current = std::move(up);
        open.push(std::move(down));
      } else {
        current = std::move(down);
        open.push(std::move(up));
      }
    }
    return complete;
  }

 private:
  static std::size_t most_fractional(const std::vector<double>& values, std::size_t from, std::size_t to) {
    std::size_t branch = values.size();
    double best = 0.0;
    for (std::size_t j = from; j < to; ++j) {
      const double dist = std::min(values[j] - std::floor(values[j]), std::ceil(values[j]) - values[j]);
      if (dist > 1e-6 && dist > best + 1e-12) {
        best = dist;
        branch = j;
      }
    }
    return branch;
  }

  double prune_level() const {
    return objective_ - granularity_ + 1e-6 * granularity_ + 1e-12 * std::abs(objective_);
  }

  double objective_of(const std::vector<std::int64_t>& x) const {
    double obj = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) obj += static_cast<double>(x[j]) * problem_.cost()[j];
    return obj;
  }

  bool satisfies_rows(const std::vector<std::int64_t>& x) const {
    for (const auto& row : problem_.rows()) {
      double a = 0.0;
      for (const auto& t : row.terms) a += t.coef * static_cast<double>(x[t.var]);
      if (a < row.lower - 1e-7 || a > row.upper + 1e-7) return false;
    }
    return true;
  }

  const lp::Problem& problem_;
  double granularity_;
  std::size_t branch_first_;
  std::size_t node_limit_;
  std::size_t nodes_ = 0;
  std::vector<std::int64_t> incumbent_;
  double objective_ = lp::kInfinity;
};

// First-fit decreasing over single reels; every bin becomes one run.
std::vector<std::int64_t> first_fit_decreasing(std::span<const ReelDemandItem> items,
                                               std::span<const PaperMachineSpec> machines,
                                               const std::map<std::pair<std::size_t, std::vector<int>>, std::size_t>& index,
                                               std::size_t pattern_count) {
  struct Bin {
    std::size_t machine;
    WidthMm remaining;
    int reels;
    std::vector<int> lanes;
  };
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return items[a].width > items[b].width; });

  std::vector<Bin> bins;
  for (std::size_t i : order) {
    for (std::int64_t r = 0; r < items[i].quantity_reels; ++r) {
      Bin* target = nullptr;
      for (auto& bin : bins) {
        const int cap = machines[bin.machine].max_reels_per_pattern.value_or(std::numeric_limits<int>::max());
        if (items[i].eligible_on(bin.machine) && bin.remaining >= items[i].width && bin.reels < cap) {
          target = &bin;
          break;
        }
      }
      if (!target) {
        std::size_t best = machines.size();
        for (std::size_t m = 0; m < machines.size(); ++m) {
          if (!items[i].eligible_on(m) || machines[m].deckle_width < items[i].width) continue;
          if (best == machines.size() || machines[m].deckle_width > machines[best].deckle_width) best = m;
        }
        bins.push_back(Bin{best, machines[best].deckle_width, 0, std::vector<int>(items.size(), 0)});
        target = &bins.back();
      }
      target->remaining -= items[i].width;
      target->reels += 1;
      target->lanes[i] += 1;
    }
  }
  std::vector<std::int64_t> counts(pattern_count, 0);
  for (const auto& bin : bins) {
    auto it = index.find({bin.machine, bin.lanes});
    if (it == index.end()) return {};
    counts[it->second] += 1;
  }
  return counts;
}

}  // namespace

std::vector<DecklePattern> enumerate_deckle_patterns(std::span<const ReelDemandItem> items,
                                                     const PaperMachineSpec& machine, std::size_t machine_index,
                                                     PatternScope scope) {
  for (const auto& item : items) {
    if (item.eligible_on(machine_index) && item.width > machine.deckle_width) {
      throw UnservableError("machine '" + machine.id + "'",
                            "demand unservable: width " + std::to_string(item.width) + " exceeds deckle " +
                                std::to_string(machine.deckle_width));
    }
  }
  std::vector<DecklePattern> out;
  enumerate_on_machine(items, machine, machine_index, scope, out);
  return out;
}

MillSolution solve_papermill(std::span<const ReelDemandItem> items, std::span<const PaperMachineSpec> machines,
                             double tolerance_up, const ReelStandard& standard, const MillOptions& options) {
  if (items.empty()) throw std::invalid_argument("solve_papermill: no demand items");
  if (machines.empty()) throw std::invalid_argument("solve_papermill: no machines");
  const std::size_t n_items = items.size();

  std::vector<std::int64_t> lo(n_items), hi(n_items);
  for (std::size_t i = 0; i < n_items; ++i) {
    if (items[i].quantity_reels < 1) throw std::invalid_argument("solve_papermill: reel quantity must be >= 1");
    bool fits = false;
    for (std::size_t m = 0; m < machines.size(); ++m) {
      fits = fits || (items[i].eligible_on(m) && items[i].width <= machines[m].deckle_width);
    }
    if (!fits) {
      throw UnservableError("width " + std::to_string(items[i].width),
                            "demand unservable: no eligible machine is wide enough");
    }
    lo[i] = items[i].quantity_reels;
    hi[i] = reel_band_upper(items[i].quantity_reels, tolerance_up);
  }

  std::vector<DecklePattern> patterns;
  for (std::size_t m = 0; m < machines.size(); ++m) {
    std::vector<DecklePattern> on_machine;
    enumerate_on_machine(items, machines[m], m, PatternScope::all_feasible, on_machine);
    for (auto& p : on_machine) {
      bool usable = true;
      for (std::size_t i = 0; i < n_items; ++i) usable = usable && p.lanes[i] <= hi[i];
      if (usable) patterns.push_back(std::move(p));
    }
  }

  // Every trim is a multiple of the gcd of the deckles and item widths.
  std::int64_t trim_step = 0;
  for (const auto& m : machines) trim_step = std::gcd<std::int64_t>(trim_step, m.deckle_width);
  for (const auto& item : items) trim_step = std::gcd<std::int64_t>(trim_step, item.width);

  // Columns: pattern run counts, then runs per machine, then reels per item.
  // Branching on the aggregates first closes the gap much faster.
  const std::size_t n_patterns = patterns.size();
  const std::size_t runs_var = n_patterns;
  const std::size_t reels_var = n_patterns + machines.size();
  std::int64_t max_runs = 0;
  for (std::size_t i = 0; i < n_items; ++i) max_runs += hi[i];

  lp::Problem problem;
  std::vector<std::int64_t> trim(n_patterns);
  std::map<std::pair<std::size_t, std::vector<int>>, std::size_t> index;
  for (std::size_t p = 0; p < n_patterns; ++p) {
    trim[p] = machines[patterns[p].machine].deckle_width - patterns[p].used_width;
    std::int64_t cap = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < n_items; ++i) {
      if (patterns[p].lanes[i] > 0) cap = std::min(cap, hi[i] / patterns[p].lanes[i]);
    }
    problem.add_variable(static_cast<double>(trim[p]), 0.0, static_cast<double>(cap));
    index[{patterns[p].machine, patterns[p].lanes}] = p;
  }
  for (std::size_t m = 0; m < machines.size(); ++m) problem.add_variable(0.0, 0.0, static_cast<double>(max_runs));
  for (std::size_t i = 0; i < n_items; ++i) {
    problem.add_variable(0.0, static_cast<double>(lo[i]), static_cast<double>(hi[i]));
  }
  for (std::size_t m = 0; m < machines.size(); ++m) {
    std::vector<lp::Term> terms;
    for (std::size_t p = 0; p < n_patterns; ++p) {
      if (patterns[p].machine == m) terms.push_back({p, 1.0});
    }
    terms.push_back({runs_var + m, -1.0});
    problem.add_row(std::move(terms), 0.0, 0.0);
  }
  for (std::size_t i = 0; i < n_items; ++i) {
    std::vector<lp::Term> terms;
    for (std::size_t p = 0; p < n_patterns; ++p) {
      if (patterns[p].lanes[i] > 0) terms.push_back({p, static_cast<double>(patterns[p].lanes[i])});
    }
    terms.push_back({reels_var + i, -1.0});
    problem.add_row(std::move(terms), 0.0, 0.0);
  }

  auto with_aggregates = [&](std::vector<std::int64_t> x) {
    x.resize(reels_var + n_items, 0);
    for (std::size_t p = 0; p < n_patterns; ++p) {
      x[runs_var + patterns[p].machine] += x[p];
      for (std::size_t i = 0; i < n_items; ++i) x[reels_var + i] += x[p] * patterns[p].lanes[i];
    }
    return x;
  };

  MillSolution sol;

  // Stage one: least trim.
  BranchAndBound trim_search(problem, static_cast<double>(trim_step), n_patterns, options.node_limit);
  auto start = first_fit_decreasing(items, machines, index, n_patterns);
  if (!start.empty()) {
    start = with_aggregates(std::move(start));
    bool ok = true;
    for (std::size_t i = 0; i < n_items; ++i) ok = ok && start[reels_var + i] >= lo[i] && start[reels_var + i] <= hi[i];
    if (ok) trim_search.set_incumbent(std::move(start));
  }
  sol.proven_optimal = trim_search.run();
  sol.nodes = trim_search.nodes();
  if (trim_search.incumbent().empty()) {
    throw UnservableError("paper machine", "tolerance band cannot be met with the available patterns");
  }
  std::vector<std::int64_t> incumbent = trim_search.incumbent();

  // Stage two: fewest runs at that trim.
  if (sol.proven_optimal) {
    std::vector<lp::Term> trim_terms;
    for (std::size_t p = 0; p < n_patterns; ++p) {
      if (trim[p] > 0) trim_terms.push_back({p, static_cast<double>(trim[p])});
      problem.set_cost(p, 0.0);
    }
    for (std::size_t m = 0; m < machines.size(); ++m) problem.set_cost(runs_var + m, 1.0);
    problem.add_row(std::move(trim_terms), -lp::kInfinity, trim_search.objective() + 0.5);
    BranchAndBound run_search(problem, 1.0, n_patterns, options.node_limit);
    run_search.set_incumbent(incumbent);
    run_search.run();
    sol.nodes += run_search.nodes();
    incumbent = run_search.incumbent();
  }

  sol.item_widths.reserve(n_items);
  for (const auto& item : items) sol.item_widths.push_back(item.width);
  sol.produced_reels.assign(n_items, 0);
  for (std::size_t p = 0; p < n_patterns; ++p) {
    if (incumbent[p] == 0) continue;
    const WidthMm deckle = machines[patterns[p].machine].deckle_width;
    sol.runs.push_back(MillRun{patterns[p], incumbent[p]});
    for (std::size_t i = 0; i < n_items; ++i) sol.produced_reels[i] += incumbent[p] * patterns[p].lanes[i];
    sol.waste_kg += static_cast<double>(incumbent[p] * trim[p]) * standard.kg_per_mm_per_reel;
    sol.production_kg += static_cast<double>(incumbent[p] * deckle) * standard.kg_per_mm_per_reel;
  }
  sol.waste_fraction = sol.production_kg > 0.0 ? sol.waste_kg / sol.production_kg : 0.0;
  return sol;
}

double attribute_pattern_waste(double tonnage, WidthMm deckle, WidthMm trim, WidthMm lane_width) {
  return tonnage * (static_cast<double>(trim) / deckle) * (static_cast<double>(lane_width) / deckle);
}

std::map<WidthMm, double> attribute_mill_waste(const MillSolution& solution,
                                               std::span<const PaperMachineSpec> machines,
                                               const ReelStandard& standard) {
  std::map<WidthMm, double> out;
  for (const auto& run : solution.runs) {
    const WidthMm deckle = machines[run.pattern.machine].deckle_width;
    const WidthMm trim = deckle - run.pattern.used_width;
    const double tonnage = static_cast<double>(run.run_count) * deckle * standard.kg_per_mm_per_reel;
    for (std::size_t i = 0; i < run.pattern.lanes.size(); ++i) {
      const int count = run.pattern.lanes[i];
      if (count == 0) continue;
      out[solution.item_widths[i]] += count * attribute_pattern_waste(tonnage, deckle, trim, solution.item_widths[i]);
    }
  }
  return out;
}

}  // namespace reelstock
