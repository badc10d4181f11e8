#pragma once

// Cost of a reel-width policy: every corrugator instance is solved, board
// consumption is exploded through the BoMs into per-grade reel demand, the
// paper machines are solved per (grade, period), and the two wastes combine
// into z = beta * w_cor + w_pm.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reelstock/corrugator.hpp"
#include "reelstock/domain.hpp"
#include "reelstock/papermill.hpp"

namespace reelstock {

struct GradeWidthCell {
  double mass_kg = 0.0;
  std::int64_t reels = 0;

  bool operator==(const GradeWidthCell&) const = default;
};

struct GradeWidthDemand {
  std::string grade_id;
  std::string period_id;
  std::map<WidthMm, GradeWidthCell> entries;

  bool operator==(const GradeWidthDemand&) const = default;
};

struct InstanceSummary {
  std::string instance_id;
  std::string corrugator_id;
  std::string period_id;
  std::string bom_id;
  double waste_kg = 0.0;
  double consumed_kg = 0.0;
  double waste_fraction = 0.0;
  std::size_t run_count = 0;
  std::map<WidthMm, double> consumption_kg;
};

struct MillSummary {
  std::string grade_id;
  std::string period_id;
  double waste_kg = 0.0;
  double production_kg = 0.0;
  double waste_fraction = 0.0;
  std::size_t run_count = 0;
  bool proven_optimal = true;
};

struct EvaluationResult {
  Policy policy;
  double beta = 1.0;
  double w_cor = 0.0;  // kg
  double w_pm = 0.0;   // kg
  double weighted_cor = 0.0;  // w_cor with grade cost weights applied
  double weighted_pm = 0.0;
  double z = 0.0;
  double corrugator_input_kg = 0.0;
  double mill_production_kg = 0.0;
  double waste_fraction_total = 0.0;  // (w_cor + w_pm) / mill production
  std::map<WidthMm, double> per_width_attribution;  // policy widths only
  std::map<WidthMm, double> corrugator_attribution;
  std::map<WidthMm, double> mill_attribution;
  std::map<WidthMm, double> per_width_consumption;  // board kg over all instances
  std::vector<InstanceSummary> per_instance;
  std::vector<MillSummary> per_mill;
  std::vector<GradeWidthDemand> demand;
};

/// Per (grade, period) demand: instance consumption per width times the BoM
/// share of each grade, summed, then converted to reels. Externally supplied
/// grades are left out. Output is sorted by grade then period.
std::vector<GradeWidthDemand> explode_bom(std::span<const CorrugatorInstance> instances,
                                          std::span<const CorrugatorSolution> solutions, const Scenario& scenario);

struct EvaluateOptions {
  std::size_t worker_count = 1;
  MillOptions mill;
};

/// Throws UnservableError naming the instance or the (grade, period) mill
/// problem that cannot be served.
EvaluationResult evaluate_policy(const Policy& policy, const Scenario& scenario, const EvaluateOptions& options = {});

struct WasteReport {
  double corrugator_waste_kg = 0.0;
  double mill_waste_kg = 0.0;
  double total_waste_kg = 0.0;
  double production_kg = 0.0;
  double corrugator_input_kg = 0.0;
  // Undefined (nullopt) when the denominator is zero.
  std::optional<double> total_percent;       // of mill production
  std::optional<double> mill_percent;        // of mill production
  std::optional<double> corrugator_percent;  // of corrugator input
};

/// Total waste of both stages as a percentage of paper-machine production,
/// plus the stage-wise percentages.
WasteReport waste_percentages(double corrugator_waste_kg, double mill_waste_kg, double production_kg,
                              double corrugator_input_kg);
WasteReport waste_percentage_report(const EvaluationResult& result);

}  // namespace reelstock
