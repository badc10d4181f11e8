#pragma once

// Shared domain types for reel-stock policy analysis: grades, bills of
// material, corrugator and paper-machine data, the reel standard, policies and
// the scenario that ties them together.
//
// Widths and lengths are integer millimetres throughout. Masses are kg.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reelstock {

using WidthMm = std::int32_t;

/// Thrown when a scenario (or any other structured input) violates its
/// invariants. Carries every violation found, not only the first.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Thrown when some demand cannot be produced from the available widths.
class UnservableError : public std::runtime_error {
 public:
  UnservableError(std::string where, const std::string& what);
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

struct Grade {
  std::string id;
  std::string name;
  std::optional<double> grammage;  // g/m2
  double cost_weight = 1.0;        // relative cost per tonne

  bool operator==(const Grade&) const = default;
};

enum class LayerRole { top, fluting, bottom, extra };

std::string_view to_string(LayerRole role);
std::optional<LayerRole> parse_layer_role(std::string_view text);

struct BomEntry {
  std::string grade_id;
  LayerRole role = LayerRole::top;
  double weight_share = 0.0;  // share of consumed board mass

  bool operator==(const BomEntry&) const = default;
};

struct Bom {
  std::string id;
  std::vector<BomEntry> entries;
  // Board basis weight. Falls back to Scenario::nominal_grammage when absent.
  std::optional<double> grammage;

  bool operator==(const Bom&) const = default;
};

struct SheetOrder {
  WidthMm width = 0;
  WidthMm length = 0;
  std::int64_t quantity = 0;  // sheets

  bool operator==(const SheetOrder&) const = default;
};

struct CorrugatorSpec {
  std::string id;
  std::string plant_id;
  WidthMm max_width = 0;
  int knife_count = 2;  // distinct sheet lengths per pattern
  std::optional<int> max_lanes;
  WidthMm min_trim = 0;
  // Over-delivery accepted per order as a fraction of the ordered area.
  // Production inside the band counts as delivered; anything above it is waste.
  double overrun_tolerance = 0.0;

  bool operator==(const CorrugatorSpec&) const = default;
};

struct CorrugatorInstance {
  std::string id;
  std::string corrugator_id;
  std::string period_id;
  std::string bom_id;
  std::vector<SheetOrder> orders;

  bool operator==(const CorrugatorInstance&) const = default;
};

struct PaperMachineSpec {
  std::string id;
  std::string mill_id;
  WidthMm deckle_width = 0;
  std::optional<int> max_reels_per_pattern;

  bool operator==(const PaperMachineSpec&) const = default;
};

struct ReelStandard {
  double kg_per_mm_per_reel = 1.072;

  bool operator==(const ReelStandard&) const = default;
};

struct ExternalDemand {
  std::string grade_id;
  WidthMm width = 0;
  std::int64_t reels = 0;
  std::string period_id;
  std::vector<std::string> machine_ids;  // empty: any machine eligible for the grade

  bool operator==(const ExternalDemand&) const = default;
};

struct Scenario {
  int schema_version = 1;
  std::vector<Grade> grades;
  std::vector<Bom> boms;
  std::vector<CorrugatorSpec> corrugators;
  std::vector<PaperMachineSpec> machines;
  ReelStandard reel_standard;
  std::vector<std::string> periods;
  std::vector<CorrugatorInstance> instances;
  std::vector<ExternalDemand> external_demand;
  std::vector<std::string> external_supply_grades;
  // Grade -> machines allowed to make it. Grades not listed may use any machine.
  std::map<std::string, std::vector<std::string>> grade_machines;
  double beta = 1.0;
  double quantity_tolerance_up = 0.05;
  double nominal_grammage = 181.0;

  bool operator==(const Scenario&) const = default;

  const Grade* find_grade(std::string_view id) const;
  const Bom* find_bom(std::string_view id) const;
  const CorrugatorSpec* find_corrugator(std::string_view id) const;
  const PaperMachineSpec* find_machine(std::string_view id) const;
  bool is_external_supply(std::string_view grade_id) const;
  double bom_grammage(const Bom& bom) const;
};

/// A set of stocked reel widths, kept strictly increasing.
class Policy {
 public:
  Policy() = default;
  /// Sorts the widths; throws std::invalid_argument on duplicates or
  /// non-positive values.
  explicit Policy(std::vector<WidthMm> widths);

  /// Parses "2200,2500" (whitespace tolerated).
  static Policy parse(std::string_view text);

  const std::vector<WidthMm>& widths() const noexcept { return widths_; }
  std::size_t cardinality() const noexcept { return widths_.size(); }
  bool empty() const noexcept { return widths_.empty(); }
  bool contains(WidthMm width) const;
  bool is_subset_of(const Policy& other) const;
  std::string to_string() const;

  /// Widths usable on a corrugator of the given maximum width.
  Policy filtered_to(WidthMm max_width) const;

  auto operator<=>(const Policy&) const = default;

 private:
  std::vector<WidthMm> widths_;
};

/// Every invariant violation in the scenario; empty when valid.
std::vector<std::string> find_violations(const Scenario& scenario);

/// Returns the scenario unchanged when valid, otherwise throws ValidationError
/// listing all violations.
Scenario validate_scenario(Scenario raw);

/// Round-half-up of mass / (width * kg_per_mm_per_reel); at least one reel for
/// any positive mass.
std::int64_t kg_to_reels(double mass_kg, WidthMm width, const ReelStandard& standard);

double reels_to_kg(std::int64_t reels, WidthMm width, const ReelStandard& standard);

}  // namespace reelstock
