#pragma once

// Corrugator trim problem for a single instance: sheet orders sharing one BoM
// are cut from the reel widths a policy makes available. A pattern places
// lanes of orders across one reel width; its run length is continuous.

#include <map>
#include <vector>

#include "reelstock/domain.hpp"

namespace reelstock {

struct CorrugatorPattern {
  WidthMm reel_width = 0;
  std::vector<int> lanes;  // lane count per order index of the instance

  WidthMm used_width(const std::vector<SheetOrder>& orders) const;
  bool operator==(const CorrugatorPattern&) const = default;
};

struct CorrugatorRun {
  CorrugatorPattern pattern;
  double run_length_m = 0.0;
  double trim_area_m2 = 0.0;
};

struct WidthConsumption {
  double area_m2 = 0.0;
  double mass_kg = 0.0;
};

struct CorrugatorSolution {
  std::vector<CorrugatorRun> runs;
  std::vector<double> produced_sheets;  // per order, fractional
  std::vector<double> production_lane_m;      // per order
  std::vector<double> overrun_area_by_order;  // m2 above the accepted band
  double grammage = 0.0;                // g/m2 used for mass conversion
  double net_area_m2 = 0.0;             // ordered sheet area
  double consumed_area_m2 = 0.0;
  double trim_area_m2 = 0.0;
  double overrun_area_m2 = 0.0;  // production above the accepted band
  double waste_area_m2 = 0.0;    // trim + overrun
  double waste_mass_kg = 0.0;
  double waste_fraction = 0.0;   // waste / consumption
  std::map<WidthMm, WidthConsumption> consumption;

  double consumed_mass_kg() const { return consumed_area_m2 * grammage / 1000.0; }
};

/// Maximal feasible patterns: at most knife_count distinct sheet lengths and
/// max_lanes lanes, fitting reel_width - min_trim, such that no further lane of
/// an order already in the pattern fits. Ordered by reel width, then by the
/// set of lengths used, then lane vector (descending).
///
/// Throws UnservableError when no usable width fits the narrowest order.
std::vector<CorrugatorPattern> enumerate_corrugator_patterns(const CorrugatorInstance& instance,
                                                             const Policy& policy,
                                                             const CorrugatorSpec& spec);

/// Minimum-waste continuous run lengths over the enumerated patterns. Among
/// equal-waste optima the solution using the most of the widest reel wins.
///
/// Throws UnservableError when some order fits no usable width.
CorrugatorSolution solve_corrugator(const CorrugatorInstance& instance, const Policy& policy,
                                    const CorrugatorSpec& spec, double grammage);

/// Waste mass attributed to reel widths: each run's trim goes to its width,
/// overrun is shared among the runs producing the overrun order.
std::map<WidthMm, double> corrugator_waste_by_width(const CorrugatorSolution& solution);

}  // namespace reelstock
