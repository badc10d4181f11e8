#pragma once

// Fixtures and random small-instance builders shared by the test programs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "reelstock/corrugator.hpp"
#include "reelstock/domain.hpp"
#include "reelstock/papermill.hpp"

namespace reelstock::testing {

inline double relative_gap(double a, double b) {
  double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) / scale;
}

// Five-order board instance cut from 2500 mm stock, double knife.
inline CorrugatorInstance five_order_instance() {
  return {"five", "C1", "W01", "B1",
          {{1150, 1210, 6500}, {1030, 980, 7000}, {660, 920, 26000}, {610, 750, 10000}, {580, 500, 18000}}};
}

inline CorrugatorSpec five_order_corrugator() { return {"C1", "P1", 2500, 2, std::nullopt, 30, 0.02}; }

inline constexpr double kFiveOrderGrammage = 181.0;

struct TableRow {
  WidthMm width;
  double kg;
  std::int64_t reels;
};

// One grade and period of reel demand.
inline std::vector<TableRow> mill_table() {
  return {{1050, 18009, 16}, {1250, 16080, 12}, {1400, 55530, 37},  {1600, 30873, 18}, {1900, 42773, 21},
          {2000, 109344, 51}, {2100, 123817, 55}, {2200, 11792, 5}, {2300, 49313, 20}, {2350, 25192, 10},
          {2400, 64319, 25},  {2450, 52528, 20}, {2500, 206360, 77}};
}

inline std::vector<ReelDemandItem> mill_table_items() {
  std::vector<ReelDemandItem> items;
  for (const auto& row : mill_table()) items.push_back({row.width, row.reels, {}});
  return items;
}

inline PaperMachineSpec machine(const std::string& id, WidthMm deckle) { return {id, "M1", deckle, std::nullopt}; }

// Three grades in a 40/20/40 board, one 2500 mm corrugator, one 5000 mm
// machine and a single period. Instances are added by the caller.
inline Scenario toy_scenario(WidthMm deckle = 5000) {
  Scenario s;
  s.grades = {{"LA", "Liner A", 180.0, 1.0}, {"FL", "Fluting", 110.0, 1.0}, {"LB", "Liner B", 180.0, 1.0}};
  s.boms = {{"B1",
             {{"LA", LayerRole::top, 0.4}, {"FL", LayerRole::fluting, 0.2}, {"LB", LayerRole::bottom, 0.4}},
             std::nullopt}};
  s.corrugators = {{"C1", "P1", 2500, 2, std::nullopt, 0, 0.0}};
  s.machines = {{"PM1", "M1", deckle, std::nullopt}};
  s.periods = {"W01"};
  return s;
}

inline Scenario toy_scenario_with(std::vector<CorrugatorInstance> instances, WidthMm deckle = 5000) {
  Scenario s = toy_scenario(deckle);
  s.instances = std::move(instances);
  return validate_scenario(s);
}

// Small corrugator instance within the oracle caps.
inline CorrugatorInstance random_small_instance(std::mt19937_64& rng, std::size_t max_orders = 3) {
  std::uniform_int_distribution<std::size_t> order_count(1, max_orders);
  std::uniform_int_distribution<int> width(30, 130);
  std::uniform_int_distribution<int> length(4, 16);
  std::uniform_int_distribution<int> quantity(1, 400);
  CorrugatorInstance instance{"R", "C1", "W01", "B1", {}};
  std::size_t n = order_count(rng);
  for (std::size_t i = 0; i < n; ++i) instance.orders.push_back({width(rng) * 10, length(rng) * 50, quantity(rng) * 10});
  return instance;
}

inline CorrugatorSpec random_small_spec(std::mt19937_64& rng, bool allow_overrun) {
  CorrugatorSpec spec{"C1", "P1", 2500, 2, std::nullopt, 0, 0.0};
  spec.knife_count = std::uniform_int_distribution<int>(2, 3)(rng);
  spec.min_trim = std::uniform_int_distribution<int>(0, 3)(rng) * 10;
  if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) spec.max_lanes = std::uniform_int_distribution<int>(2, 5)(rng);
  if (allow_overrun && std::uniform_int_distribution<int>(0, 1)(rng) == 1) spec.overrun_tolerance = 0.02;
  return spec;
}

// Policy of `count` distinct widths that can serve every order in the
// instance: the widest is always 2500.
inline Policy random_small_policy(std::mt19937_64& rng, std::size_t count) {
  std::vector<WidthMm> widths{2500};
  std::uniform_int_distribution<int> pick(140, 249);
  while (widths.size() < count) {
    WidthMm w = pick(rng) * 10;
    if (std::find(widths.begin(), widths.end(), w) == widths.end()) widths.push_back(w);
  }
  return Policy(widths);
}

// Random one-machine reel demand within the oracle caps.
inline std::vector<ReelDemandItem> random_mill_items(std::mt19937_64& rng, std::size_t max_items = 4,
                                                     std::int64_t max_reels = 6) {
  std::uniform_int_distribution<std::size_t> item_count(1, max_items);
  std::uniform_int_distribution<int> width(90, 260);
  std::uniform_int_distribution<std::int64_t> reels(1, max_reels);
  std::vector<ReelDemandItem> items;
  std::size_t n = item_count(rng);
  while (items.size() < n) {
    WidthMm w = width(rng) * 10;
    bool seen = std::any_of(items.begin(), items.end(), [&](const ReelDemandItem& it) { return it.width == w; });
    if (!seen) items.push_back({w, reels(rng), {}});
  }
  return items;
}

}  // namespace reelstock::testing
