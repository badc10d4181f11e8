#pragma once

// Synthetic scenarios for tests and desk-scale studies. Deterministic per seed.

#include <cstdint>
#include <vector>

#include "reelstock/domain.hpp"

namespace reelstock {

struct IntRange {
  std::int64_t min = 0;
  std::int64_t max = 0;

  bool operator==(const IntRange&) const = default;
};

struct GeneratorParams {
  std::uint64_t seed = 1;
  std::int64_t instance_count = 20;
  IntRange orders_per_instance{3, 6};
  IntRange sheet_width{500, 1150};
  WidthMm sheet_width_step = 10;
  IntRange sheet_length{600, 1600};
  WidthMm sheet_length_step = 50;
  // Distinct sheet lengths drawn per instance; orders share them.
  IntRange lengths_per_instance{1, 3};
  IntRange quantity{500, 6000};
  std::int64_t grade_count = 3;
  std::int64_t bom_count = 4;
  std::int64_t period_count = 4;
  double fluting_take_up = 1.2;
  IntRange liner_grammage{125, 200};
  IntRange fluting_grammage{100, 150};
  std::vector<CorrugatorSpec> corrugators;  // empty: one 2500 mm corrugator
  std::vector<PaperMachineSpec> machines;   // empty: one 6000 mm machine
  double beta = 1.0;

  bool operator==(const GeneratorParams&) const = default;
};

/// Throws ValidationError on inconsistent parameters, for example sheet
/// widths that fit no corrugator.
Scenario generate_scenario(const GeneratorParams& params);

}  // namespace reelstock
