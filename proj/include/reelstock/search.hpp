#pragma once

// Tabu local search over reel-width policies. Every evaluated policy stays
// tabu for good; candidates whose z is close enough to the best so far are
// perturbed further, with the allowed gap shrinking as more policies are
// analysed.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "reelstock/domain.hpp"
#include "reelstock/evaluate.hpp"

namespace reelstock {

struct SearchConfig {
  double epsilon = 0.30;
  double delta = 0.05;
  WidthMm width_grid = 5;
  WidthMm width_min = 0;  // 0: narrowest sheet width in the scenario
  WidthMm width_max = 0;  // 0: widest corrugator
  std::size_t cardinality_min = 0;  // 0: 1
  std::size_t cardinality_max = 0;  // 0: cardinality of the initial policy
  std::size_t max_evaluations = 500;
  std::size_t worker_count = 0;  // 0: hardware concurrency
  std::uint64_t seed = 1;
  std::size_t candidates_per_expansion = 8;
  int jitter_max_steps = 5;
  std::optional<double> wall_clock_seconds;
  MillOptions mill;
};

/// Fills the zero defaults from the scenario and initial policy and checks
/// the invariants. Throws ValidationError.
SearchConfig resolve_config(SearchConfig config, const Scenario& scenario, const Policy& initial);

/// z / z_best <= 1 + epsilon * exp(-delta * N). With z_best <= 0 only
/// candidates at least as good pass.
bool accept_for_expansion(double z_candidate, double z_best, std::size_t analysed, const SearchConfig& config);

/// Sorted, grid-aligned, inside [width_min, width_max], cardinality in range.
bool is_canonical(const Policy& policy, const SearchConfig& config);

enum class Move { initial, jitter, replace, remove, insert, double_jitter };
std::string to_string(Move move);
std::optional<Move> parse_move(std::string_view text);

struct Candidate {
  Policy policy;
  Move move = Move::jitter;
};

// Single moves. Each returns nullopt when the result would not be canonical.
std::optional<Policy> jitter_move(const Policy& policy, std::size_t element, int steps, const SearchConfig& config);
std::optional<Policy> replace_move(const Policy& policy, std::size_t element, WidthMm width,
                                   const SearchConfig& config);
std::optional<Policy> remove_move(const Policy& policy, std::size_t element, const SearchConfig& config);
std::optional<Policy> insert_move(const Policy& policy, WidthMm width, const SearchConfig& config);

/// Up to candidates_per_expansion canonical neighbours, none equal to the
/// input or rejected by `is_tabu`. Random moves come first, guided by the
/// per-width waste attribution and consumption; a deterministic sweep of the
/// jitter, remove and insert neighbourhood tops up the list.
std::vector<Candidate> perturb(const Policy& policy, const std::map<WidthMm, double>& attribution,
                               const std::map<WidthMm, double>& consumption, const SearchConfig& config,
                               std::mt19937_64& rng, const std::function<bool(const Policy&)>& is_tabu);

struct HistoryEntry {
  Policy policy;
  double z = 0.0;  // +inf when the policy cannot serve the scenario
  std::size_t ordinal = 0;
  std::optional<Policy> parent;
  Move move = Move::initial;
};

enum class StopReason { budget, queue_empty, wall_clock };

struct SearchResult {
  Policy best_policy;
  EvaluationResult best;
  std::vector<HistoryEntry> history;
  std::map<Policy, double> evaluated;
  StopReason stop = StopReason::budget;
};

struct SearchHooks {
  std::function<void(const HistoryEntry&)> on_evaluated;
};

/// Throws UnservableError when the initial policy cannot be evaluated.
SearchResult search(const Scenario& scenario, const Policy& initial, const SearchConfig& config,
                    const SearchHooks& hooks = {});

}  // namespace reelstock
