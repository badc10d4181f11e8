#pragma once

// JSON files: scenarios, generator parameters and evaluation results, plus the
// line-oriented search history and histogram CSV.
//
// Scenario layout (schema_version 1):
//   schema_version, beta, quantity_tolerance_up, nominal_grammage,
//   reel_standard {kg_per_mm_per_reel},
//   grades [{id, name, grammage?, cost_weight?}],
//   boms [{id, grammage?, entries [{grade, role, share}]}],
//   corrugators [{id, plant, max_width, knife_count, max_lanes?, min_trim,
//                 overrun_tolerance}],
//   machines [{id, mill, deckle_width, max_reels_per_pattern?}],
//   periods [id...],
//   instances [{id, corrugator, period, bom,
//               orders [{width, length, quantity}]}],
//   external_demand [{grade, width, reels, period, machines?}],
//   external_supply [grade...], grade_machines {grade: [machine...]}
// Widths, lengths and counts must be integers.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "reelstock/domain.hpp"
#include "reelstock/evaluate.hpp"
#include "reelstock/generator.hpp"
#include "reelstock/search.hpp"
#include "reelstock/stats.hpp"

namespace reelstock::io {

/// Throws ValidationError listing structural problems and scenario violations.
Scenario parse_scenario(std::string_view json_text);
std::string serialize_scenario(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const Scenario& scenario);

/// 64-bit FNV-1a of the serialized scenario, as 16 hex digits.
std::string scenario_digest(const Scenario& scenario);

/// Missing keys keep their defaults. Throws ValidationError.
GeneratorParams parse_generator_params(std::string_view json_text);
std::string serialize_generator_params(const GeneratorParams& params);

std::string serialize_result(const EvaluationResult& result, const std::string& digest, double elapsed_seconds);

// History: tab-separated, one header line then one row per evaluation:
//   widths  z  parent  move  ordinal
// z is printed with 17 significant digits, "inf" for unservable policies;
// parent is "-" for the initial policy.
std::string history_header();
std::string format_history_row(const HistoryEntry& entry);
/// Throws ValidationError on malformed rows.
std::vector<HistoryEntry> parse_history(std::string_view text);

/// "bin_lower,count" rows after a header line.
std::string format_histogram(const std::vector<HistogramBin>& bins);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace reelstock::io
