#include "reelstock/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace reelstock {

namespace {

// Order statistic at plotting position p, 0-based position p * n - 0.5,
// linearly interpolated.
double order_statistic(const std::vector<double>& sorted, double p) {
  const double n = static_cast<double>(sorted.size());
  const double h = std::clamp(p * n - 0.5, 0.0, n - 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double f = h - static_cast<double>(lo);
  return sorted[lo] * (1.0 - f) + sorted[lo + 1] * f;
}

double standard_error(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

}  // namespace

double estimate_location(std::span<const double> samples, const LocationOptions& options) {
  if (samples.size() < 10) throw std::invalid_argument("estimate_location: at least 10 samples required");
  if (!(options.upper_percentile > 0.0 && options.upper_percentile < 1.0)) {
    throw std::invalid_argument("estimate_location: upper percentile must lie in (0, 1)");
  }
  std::vector<double> x(samples.begin(), samples.end());
  if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("estimate_location: samples must be finite");
  }
  std::sort(x.begin(), x.end());
  const double x1 = x.front();
  if (x.back() == x1) return x1;

  const double n = static_cast<double>(x.size());
  const double l1 = -std::log1p(-1.0 / (n + 1.0));
  const double lu = -std::log1p(-options.upper_percentile);
  const double pm = -std::expm1(-std::sqrt(l1 * lu));
  const double xu = order_statistic(x, options.upper_percentile);
  const double xm = order_statistic(x, pm);

  const double denom = x1 + xu - 2.0 * xm;
  if (std::abs(denom) <= 1e-12 * (x.back() - x1)) return x1 - standard_error(x);
  return std::min((x1 * xu - xm * xm) / denom, x1);
}

WeibullFit fit_weibull(std::span<const double> samples, const LocationEstimator& estimator) {
  if (samples.size() < 10) throw std::invalid_argument("fit_weibull: at least 10 samples required");
  WeibullFit fit;
  fit.sample_size = samples.size();
  fit.location = estimator ? estimator(samples) : estimate_location(samples);

  std::vector<double> y;
  for (double v : samples) {
    if (v - fit.location > 0.0) y.push_back(v - fit.location);
  }
  if (y.size() < 2) {
    fit.diagnostics = "fewer than two samples above the location";
    return fit;
  }
  if (y.size() < samples.size()) {
    fit.diagnostics = std::to_string(samples.size() - y.size()) + " sample(s) at the location left out of the fit";
  }
  // Work on y / max(y) to keep powers in range.
  const double top = *std::max_element(y.begin(), y.end());
  std::vector<double> u(y.size()), log_u(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    u[i] = y[i] / top;
    log_u[i] = std::log(u[i]);
  }
  const double mean_log = std::accumulate(log_u.begin(), log_u.end(), 0.0) / static_cast<double>(u.size());

  // Profile score in the shape k; increasing in k.
  auto score = [&](double k, double* slope) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double p = std::pow(u[i], k);
      s0 += p;
      s1 += p * log_u[i];
      s2 += p * log_u[i] * log_u[i];
    }
    if (slope) *slope = (s2 * s0 - s1 * s1) / (s0 * s0) + 1.0 / (k * k);
    return s1 / s0 - 1.0 / k - mean_log;
  };

  double lo = 1e-3, hi = 1.0;
  while (score(hi, nullptr) < 0.0 && hi < 1e4) hi *= 2.0;
  while (score(lo, nullptr) > 0.0 && lo > 1e-8) lo /= 2.0;
  double k = 0.5 * (lo + hi);
  bool converged = false;
  for (fit.iterations = 1; fit.iterations <= 200; ++fit.iterations) {
    double slope = 0.0;
    const double g = score(k, &slope);
    if (g < 0.0) {
      lo = k;
    } else {
      hi = k;
    }
    double next = k - g / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - k) <= 1e-12 * std::max(1.0, k)) {
      k = next;
      converged = true;
      break;
    }
    k = next;
  }
  double mean_pow = 0.0;
  for (double v : u) mean_pow += std::pow(v, k);
  mean_pow /= static_cast<double>(u.size());

  fit.shape = k;
  fit.scale = top * std::pow(mean_pow, 1.0 / k);
  fit.converged = converged && std::isfinite(fit.scale) && fit.scale > 0.0;
  if (!fit.converged) {
    if (!fit.diagnostics.empty()) fit.diagnostics += "; ";
    fit.diagnostics += "shape iteration did not converge (bracket " + std::to_string(lo) + ".." + std::to_string(hi) + ")";
  }
  return fit;
}

std::vector<HistogramBin> histogram(std::span<const double> samples, std::size_t bin_count) {
  if (samples.empty()) throw std::invalid_argument("histogram: empty sample");
  if (bin_count < 1) throw std::invalid_argument("histogram: bin_count must be >= 1");
  const auto [min_it, max_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *min_it, range = *max_it - *min_it;
  if (!std::isfinite(range)) throw std::invalid_argument("histogram: samples must be finite");
  if (range == 0.0) return {HistogramBin{lo, samples.size()}};

  const double width = range / static_cast<double>(bin_count);
  std::vector<HistogramBin> bins(bin_count);
  for (std::size_t b = 0; b < bin_count; ++b) bins[b].lower = lo + width * static_cast<double>(b);
  for (double v : samples) {
    const double pos = std::ceil((v - lo) / width) - 1.0;
    const auto idx = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bin_count - 1)));
    ++bins[idx].count;
  }
  return bins;
}

}  // namespace reelstock
