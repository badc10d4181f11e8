#pragma once

// Paper-machine deckle problem: integer runs of reel patterns across one or
// more machines meeting per-width reel demand inside a -0% / +tolerance band,
// minimising trim.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "reelstock/domain.hpp"

namespace reelstock {

struct ReelDemandItem {
  WidthMm width = 0;
  std::int64_t quantity_reels = 0;
  // Indices into the machine list; empty means every machine.
  std::vector<std::size_t> eligible_machines;

  bool eligible_on(std::size_t machine) const;
};

struct DecklePattern {
  std::size_t machine = 0;  // index into the machine list
  std::vector<int> lanes;   // reels per item index
  WidthMm used_width = 0;

  bool operator==(const DecklePattern&) const = default;
};

struct MillRun {
  DecklePattern pattern;
  std::int64_t run_count = 0;
};

struct MillSolution {
  std::vector<MillRun> runs;
  std::vector<WidthMm> item_widths;
  std::vector<std::int64_t> produced_reels;  // per item
  double waste_kg = 0.0;
  double production_kg = 0.0;
  double waste_fraction = 0.0;
  bool proven_optimal = true;
  std::size_t nodes = 0;
};

enum class PatternScope {
  maximal,       // no further reel of any eligible item fits
  all_feasible,  // every non-empty pattern that fits the deckle
};

/// Patterns for one machine over the items eligible on it. Throws
/// UnservableError when an eligible item is wider than the deckle.
std::vector<DecklePattern> enumerate_deckle_patterns(std::span<const ReelDemandItem> items,
                                                     const PaperMachineSpec& machine,
                                                     std::size_t machine_index = 0,
                                                     PatternScope scope = PatternScope::maximal);

struct MillOptions {
  std::size_t node_limit = 500000;
};

/// Exact minimum-trim integer solution by LP-based branch-and-bound over all
/// feasible patterns. Among equal-trim optima the one with fewest runs is kept.
///
/// Throws UnservableError when an item fits no eligible machine or the
/// tolerance band cannot be met.
MillSolution solve_papermill(std::span<const ReelDemandItem> items, std::span<const PaperMachineSpec> machines,
                             double tolerance_up, const ReelStandard& standard, const MillOptions& options = {});

/// Share of a run's trim attributed to one lane: tonnage * (trim / deckle) *
/// (lane_width / deckle).
double attribute_pattern_waste(double tonnage, WidthMm deckle, WidthMm trim, WidthMm lane_width);

/// Trim mass attributed to item widths, summed over runs and lanes.
std::map<WidthMm, double> attribute_mill_waste(const MillSolution& solution,
                                               std::span<const PaperMachineSpec> machines,
                                               const ReelStandard& standard);

/// Upper end of the reel band: floor(q * (1 + tolerance_up)).
std::int64_t reel_band_upper(std::int64_t quantity, double tolerance_up);

}  // namespace reelstock
