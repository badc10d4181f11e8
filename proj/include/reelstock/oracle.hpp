#pragma once

// Exhaustive reference solvers for small instances. They share no code with
// the production solvers beyond the domain types and are only meant for
// cross-checking.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "reelstock/domain.hpp"
#include "reelstock/evaluate.hpp"
#include "reelstock/papermill.hpp"

namespace reelstock::oracle {

inline constexpr std::size_t kMaxCorrugatorOrders = 3;
inline constexpr std::size_t kMaxCorrugatorWidths = 2;
inline constexpr std::size_t kMaxMillItems = 4;
inline constexpr std::int64_t kMaxMillReels = 6;
inline constexpr std::size_t kMaxPolicyGrid = 8;
inline constexpr std::size_t kMaxPolicyCardinality = 3;

/// Thrown when an input exceeds the oracle caps above.
class OracleLimitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CorrugatorOptimum {
  double consumed_area_m2 = 0.0;
  double waste_area_m2 = 0.0;
};

/// Every feasible pattern (not only maximal ones) and every basic solution of
/// the continuous run-length program. Overproduction counts as waste, so the
/// corrugator overrun_tolerance must be 0. Throws OracleLimitError above the caps
/// and UnservableError when some order cannot be covered.
CorrugatorOptimum brute_force_corrugator(const CorrugatorInstance& instance, const Policy& policy,
                                         const CorrugatorSpec& spec);

struct MillOptimum {
  std::int64_t trim_mm = 0;  // summed over runs
  std::int64_t runs = 0;     // fewest runs among least-trim solutions
  double waste_kg = 0.0;
  double production_kg = 0.0;
};

/// Exact least trim, then fewest runs, over every integer run-count vector
/// whose production lies inside the demand bands, by dynamic programming on
/// the produced-reel vector. One machine. Throws OracleLimitError above the
/// caps and UnservableError when no vector fits the bands.
MillOptimum brute_force_mill(std::span<const ReelDemandItem> items, const PaperMachineSpec& machine,
                             double tolerance_up, const ReelStandard& standard = {});

struct PolicyOptimum {
  Policy policy;
  double z = 0.0;
  std::size_t evaluated = 0;
  std::size_t unservable = 0;
};

/// evaluate_policy over every subset of the grid with the given cardinality;
/// ties keep the lexicographically smallest policy. Throws UnservableError
/// when no subset can serve the scenario.
PolicyOptimum brute_force_policy(const Scenario& scenario, std::span<const WidthMm> grid, std::size_t cardinality,
                                 const EvaluateOptions& options = {});

}  // namespace reelstock::oracle
