#pragma once

// Statistical estimate of the unattained minimum of the objective: a
// three-parameter Weibull is fitted to the objective values seen during a
// search and its location parameter read off as the estimate.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace reelstock {

struct LocationOptions {
  // Plotting position of the upper order statistic.
  double upper_percentile = 0.63;
};

/// Three-order-statistic location estimate
///   a = (X1 * Xu - Xm^2) / (X1 + Xu - 2 Xm)
/// with X1 the sample minimum, Xu the order statistic at upper_percentile and
/// Xm the one at the matching middle percentile 1 - exp(-sqrt(L1 * Lu)),
/// L = -ln(1 - p), p1 = 1 / (n + 1). The middle point makes the estimate
/// exact for any shape when the order statistics sit at their quantiles.
/// Clamped to <= X1.
///
/// Needs >= 10 finite samples (std::invalid_argument otherwise). All-equal
/// samples return that value; a vanishing denominator falls back to
/// X1 minus one standard error.
double estimate_location(std::span<const double> samples, const LocationOptions& options = {});

using LocationEstimator = std::function<double(std::span<const double>)>;

struct WeibullFit {
  double location = 0.0;
  double scale = 0.0;
  double shape = 0.0;
  std::size_t sample_size = 0;
  bool converged = false;
  std::size_t iterations = 0;
  std::string diagnostics;  // empty when converged cleanly
};

/// Location from the estimator (estimate_location by default), then shape
/// and scale by maximum likelihood on the shifted samples that are strictly
/// above the location. Non-convergence is reported in the result.
WeibullFit fit_weibull(std::span<const double> samples, const LocationEstimator& estimator = {});

struct HistogramBin {
  double lower = 0.0;
  std::size_t count = 0;

  bool operator==(const HistogramBin&) const = default;
};

/// Equal-width bins over [min, max]. Bins are closed on the right, except the
/// first which also holds the minimum. A zero range gives one bin.
std::vector<HistogramBin> histogram(std::span<const double> samples, std::size_t bin_count);

}  // namespace reelstock
