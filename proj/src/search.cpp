#include "reelstock/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <thread>

#include "parallel.hpp"

namespace reelstock {

namespace {

WidthMm snap(WidthMm width, WidthMm grid) {
  const auto q = static_cast<WidthMm>(std::lround(static_cast<double>(width) / grid));
  return q * grid;
}

WidthMm ceil_to(WidthMm width, WidthMm grid) { return (width + grid - 1) / grid * grid; }
WidthMm floor_to(WidthMm width, WidthMm grid) { return width / grid * grid; }

// Snaps every width to the grid; nullopt on duplicates or any violation.
std::optional<Policy> canonical_from(std::vector<WidthMm> widths, const SearchConfig& config) {
  for (auto& w : widths) {
    w = snap(w, config.width_grid);
    if (w < config.width_min || w > config.width_max) return std::nullopt;
  }
  std::sort(widths.begin(), widths.end());
  if (std::adjacent_find(widths.begin(), widths.end()) != widths.end()) return std::nullopt;
  if (widths.size() < config.cardinality_min || widths.size() > config.cardinality_max) return std::nullopt;
  return Policy(std::move(widths));
}

std::vector<WidthMm> grid_widths(const SearchConfig& config) {
  std::vector<WidthMm> out;
  for (WidthMm w = ceil_to(config.width_min, config.width_grid); w <= config.width_max; w += config.width_grid) {
    out.push_back(w);
  }
  return out;
}

}  // namespace

SearchConfig resolve_config(SearchConfig config, const Scenario& scenario, const Policy& initial) {
  std::vector<std::string> problems;
  if (config.width_grid < 1) problems.push_back("width grid must be >= 1");
  if (!(config.epsilon >= 0.0)) problems.push_back("epsilon must be >= 0");
  if (!(config.delta >= 0.0)) problems.push_back("delta must be >= 0");
  if (config.max_evaluations < 1) problems.push_back("evaluation budget must be >= 1");
  if (config.candidates_per_expansion < 1) problems.push_back("candidates per expansion must be >= 1");
  if (config.jitter_max_steps < 1) problems.push_back("jitter steps must be >= 1");
  if (!problems.empty()) throw ValidationError(problems);

  if (config.width_min == 0) {
    WidthMm narrowest = std::numeric_limits<WidthMm>::max();
    for (const auto& inst : scenario.instances) {
      for (const auto& o : inst.orders) narrowest = std::min(narrowest, o.width);
    }
    if (!initial.empty()) narrowest = std::min(narrowest, initial.widths().front());
    config.width_min = narrowest == std::numeric_limits<WidthMm>::max() ? config.width_grid
                                                                          : ceil_to(narrowest, config.width_grid);
  }
  if (config.width_max == 0) {
    WidthMm widest = 0;
    for (const auto& c : scenario.corrugators) widest = std::max(widest, c.max_width);
    if (!initial.empty()) widest = std::max(widest, initial.widths().back());
    config.width_max = floor_to(widest, config.width_grid);
  }
  if (config.cardinality_min == 0) config.cardinality_min = 1;
  if (config.cardinality_max == 0) config.cardinality_max = std::max(config.cardinality_min, initial.cardinality());
  if (config.worker_count == 0) config.worker_count = std::max(1u, std::thread::hardware_concurrency());

  if (config.width_min > config.width_max) problems.push_back("width_min exceeds width_max");
  if (config.cardinality_min > config.cardinality_max) problems.push_back("cardinality_min exceeds cardinality_max");
  if (!problems.empty()) throw ValidationError(problems);
  return config;
}

bool accept_for_expansion(double z_candidate, double z_best, std::size_t analysed, const SearchConfig& config) {
  if (!std::isfinite(z_candidate)) return false;
  if (z_best <= 0.0) return z_candidate <= z_best;
  const double threshold = 1.0 + config.epsilon * std::exp(-config.delta * static_cast<double>(analysed));
  return z_candidate / z_best <= threshold;
}

bool is_canonical(const Policy& policy, const SearchConfig& config) {
  if (policy.cardinality() < config.cardinality_min || policy.cardinality() > config.cardinality_max) return false;
  return std::all_of(policy.widths().begin(), policy.widths().end(), [&](WidthMm w) {
    return w % config.width_grid == 0 && w >= config.width_min && w <= config.width_max;
  });
}

std::string to_string(Move move) {
  switch (move) {
    case Move::initial:
      return "initial";
    case Move::jitter:
      return "jitter";
    case Move::replace:
      return "replace";
    case Move::remove:
      return "remove";
    case Move::insert:
      return "insert";
    case Move::double_jitter:
      return "double-jitter";
  }
  return "unknown";
}

std::optional<Move> parse_move(std::string_view text) {
  for (Move m : {Move::initial, Move::jitter, Move::replace, Move::remove, Move::insert, Move::double_jitter}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

std::optional<Policy> jitter_move(const Policy& policy, std::size_t element, int steps, const SearchConfig& config) {
  if (element >= policy.cardinality() || steps == 0) return std::nullopt;
  std::vector<WidthMm> widths = policy.widths();
  widths[element] = snap(widths[element], config.width_grid) + steps * config.width_grid;
  return canonical_from(std::move(widths), config);
}

std::optional<Policy> replace_move(const Policy& policy, std::size_t element, WidthMm width,
                                   const SearchConfig& config) {
  if (element >= policy.cardinality()) return std::nullopt;
  std::vector<WidthMm> widths = policy.widths();
  widths[element] = width;
  return canonical_from(std::move(widths), config);
}

std::optional<Policy> remove_move(const Policy& policy, std::size_t element, const SearchConfig& config) {
  if (element >= policy.cardinality()) return std::nullopt;
  std::vector<WidthMm> widths = policy.widths();
  widths.erase(widths.begin() + static_cast<std::ptrdiff_t>(element));
  return canonical_from(std::move(widths), config);
}

std::optional<Policy> insert_move(const Policy& policy, WidthMm width, const SearchConfig& config) {
  std::vector<WidthMm> widths = policy.widths();
  widths.push_back(width);
  return canonical_from(std::move(widths), config);
}

std::vector<Candidate> perturb(const Policy& policy, const std::map<WidthMm, double>& attribution,
                               const std::map<WidthMm, double>& consumption, const SearchConfig& config,
                               std::mt19937_64& rng, const std::function<bool(const Policy&)>& is_tabu) {
  std::vector<Candidate> out;
  if (policy.empty()) return out;
  const std::size_t want = config.candidates_per_expansion;
  std::set<Policy> taken;
  auto offer = [&](std::optional<Policy> p, Move move) {
    if (!p || *p == policy || taken.count(*p) || (is_tabu && is_tabu(*p))) return;
    taken.insert(*p);
    out.push_back(Candidate{std::move(*p), move});
  };

  const auto& widths = policy.widths();
  const std::size_t card = widths.size();
  const auto grid = grid_widths(config);
  auto value_at = [](const std::map<WidthMm, double>& m, WidthMm w) {
    auto it = m.find(w);
    return it == m.end() ? 0.0 : it->second;
  };

  std::vector<double> waste(card);
  for (std::size_t i = 0; i < card; ++i) waste[i] = std::max(0.0, value_at(attribution, widths[i]));
  const double total_waste = std::accumulate(waste.begin(), waste.end(), 0.0);
  if (total_waste <= 0.0) std::fill(waste.begin(), waste.end(), 1.0);
  const std::size_t most_waste =
      static_cast<std::size_t>(std::max_element(waste.begin(), waste.end()) - waste.begin());
  std::size_t least_used = 0;
  for (std::size_t i = 1; i < card; ++i) {
    if (value_at(consumption, widths[i]) < value_at(consumption, widths[least_used])) least_used = i;
  }

  std::discrete_distribution<int> pick_move({3.0, 2.0, 1.0, 1.0, 1.0});
  std::discrete_distribution<std::size_t> pick_wasteful(waste.begin(), waste.end());
  std::uniform_int_distribution<std::size_t> pick_element(0, card - 1);
  std::uniform_int_distribution<int> pick_steps(1, config.jitter_max_steps);
  std::uniform_int_distribution<int> pick_sign(0, 1);
  auto random_steps = [&] { return pick_sign(rng) ? pick_steps(rng) : -pick_steps(rng); };
  auto random_width = [&] {
    return grid.empty() ? WidthMm{0} : grid[std::uniform_int_distribution<std::size_t>(0, grid.size() - 1)(rng)];
  };

  for (std::size_t attempt = 0; out.size() < want && attempt < 4 * want; ++attempt) {
    switch (pick_move(rng)) {
      case 0:
        offer(jitter_move(policy, pick_wasteful(rng), random_steps(), config), Move::jitter);
        break;
      case 1:
        offer(replace_move(policy, most_waste, random_width(), config), Move::replace);
        break;
      case 2:
        offer(remove_move(policy, least_used, config), Move::remove);
        break;
      case 3:
        offer(insert_move(policy, random_width(), config), Move::insert);
        break;
      default: {
        if (card < 2) break;
        const std::size_t a = pick_element(rng);
        std::size_t b = pick_element(rng);
        if (a == b) b = (a + 1) % card;
        const int sa = random_steps();
        const int sb = random_steps();
        if (auto first = jitter_move(policy, a, sa, config)) {
          // Element b keeps its rank unless the first shift crossed it.
          const WidthMm target = snap(widths[b], config.width_grid);
          const auto& moved = first->widths();
          auto it = std::find(moved.begin(), moved.end(), target);
          if (it != moved.end()) {
            offer(jitter_move(*first, static_cast<std::size_t>(it - moved.begin()), sb, config),
                  Move::double_jitter);
          }
        }
        break;
      }
    }
  }

  // Deterministic top-up over the whole single-move neighbourhood.
  for (std::size_t i = 0; i < card && out.size() < want; ++i) {
    for (int k = 1; k <= config.jitter_max_steps && out.size() < want; ++k) {
      offer(jitter_move(policy, i, -k, config), Move::jitter);
      offer(jitter_move(policy, i, k, config), Move::jitter);
    }
  }
  for (std::size_t i = 0; i < card && out.size() < want; ++i) offer(remove_move(policy, i, config), Move::remove);
  for (std::size_t g = 0; g < grid.size() && out.size() < want; ++g) {
    offer(insert_move(policy, grid[g], config), Move::insert);
  }
  for (std::size_t i = 0; i < card && out.size() < want; ++i) {
    for (std::size_t g = 0; g < grid.size() && out.size() < want; ++g) {
      offer(replace_move(policy, i, grid[g], config), Move::replace);
    }
  }
  if (out.size() > want) out.resize(want);
  return out;
}

namespace {

struct Queued {
  double key;
  std::size_t seq;
  Candidate candidate;
  Policy parent;
};

struct QueueOrder {
  bool operator()(const Queued& a, const Queued& b) const {
    if (a.key != b.key) return a.key < b.key;
    return a.seq < b.seq;
  }
};

}  // namespace

SearchResult search(const Scenario& scenario, const Policy& initial, const SearchConfig& config,
                    const SearchHooks& hooks) {
  const SearchConfig cfg = resolve_config(config, scenario, initial);
  const auto started = std::chrono::steady_clock::now();
  std::mt19937_64 rng(cfg.seed);

  EvaluateOptions eval_options;
  eval_options.worker_count = cfg.worker_count;
  eval_options.mill = cfg.mill;

  SearchResult out;
  out.best = evaluate_policy(initial, scenario, eval_options);
  out.best_policy = initial;

  std::set<Policy> seen{initial};
  std::set<Queued, QueueOrder> queue;
  std::size_t seq = 0;

  auto record = [&](const Policy& policy, double z, std::optional<Policy> parent, Move move) {
    out.evaluated[policy] = z;
    out.history.push_back(HistoryEntry{policy, z, out.history.size() + 1, std::move(parent), move});
    if (hooks.on_evaluated) hooks.on_evaluated(out.history.back());
  };
  auto expand = [&](const Policy& policy, const EvaluationResult& result) {
    const auto children = perturb(policy, result.per_width_attribution, result.per_width_consumption, cfg, rng,
                                  [&](const Policy& p) { return seen.count(p) > 0; });
    for (const auto& child : children) {
      seen.insert(child.policy);
      queue.insert(Queued{result.z, seq++, child, policy});
    }
  };

  record(initial, out.best.z, std::nullopt, Move::initial);
  expand(initial, out.best);

  for (;;) {
    if (out.evaluated.size() >= cfg.max_evaluations) {
      out.stop = StopReason::budget;
      break;
    }
    if (queue.empty()) {
      out.stop = StopReason::queue_empty;
      break;
    }
    if (cfg.wall_clock_seconds) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
      if (elapsed.count() >= *cfg.wall_clock_seconds) {
        out.stop = StopReason::wall_clock;
        break;
      }
    }

    const std::size_t batch_size =
        std::min({cfg.worker_count, cfg.max_evaluations - out.evaluated.size(), queue.size()});
    std::vector<Queued> batch;
    for (std::size_t b = 0; b < batch_size; ++b) {
      batch.push_back(*queue.begin());
      queue.erase(queue.begin());
    }

    EvaluateOptions inner = eval_options;
    inner.worker_count = std::max<std::size_t>(1, cfg.worker_count / batch.size());
    std::vector<std::optional<EvaluationResult>> results(batch.size());
    detail::parallel_for(batch.size(), cfg.worker_count, [&](std::size_t b) {
      try {
        results[b] = evaluate_policy(batch[b].candidate.policy, scenario, inner);
      } catch (const UnservableError&) {
        results[b].reset();
      }
    });

    for (std::size_t b = 0; b < batch.size(); ++b) {
      const Policy& policy = batch[b].candidate.policy;
      const std::size_t analysed = out.evaluated.size();
      const double z = results[b] ? results[b]->z : std::numeric_limits<double>::infinity();
      record(policy, z, batch[b].parent, batch[b].candidate.move);
      if (!results[b]) continue;
      if (z < out.best.z) {
        out.best = *results[b];
        out.best_policy = policy;
      }
      if (accept_for_expansion(z, out.best.z, analysed, cfg)) expand(policy, *results[b]);
    }
  }
  return out;
}

}  // namespace reelstock
