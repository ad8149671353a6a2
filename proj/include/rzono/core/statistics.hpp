#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "rzono/core/error.hpp"
#include "rzono/core/numeric.hpp"
#include "rzono/random/philox.hpp"

namespace rzono {

/// A Monte Carlo mean with its standard error and seed provenance.
struct EstimateResult {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n_samples)
  std::uint64_t n_samples = 0;
  SeedSpec seed;
};

/// Ordered two-pass mean / standard error of `values` (n >= 2).
inline EstimateResult summarize(std::span<const double> values, const SeedSpec& seed) {
  detail::require(values.size() >= 2, "an estimate needs at least two samples");
  const double n = static_cast<double>(values.size());
  const double mean = ordered_sum(values) / n;
  KahanSum<double> squares;
  for (double v : values) squares.add((v - mean) * (v - mean));
  const double variance = squares.value() / (n - 1.0);
  return {mean, std::sqrt(variance / n), values.size(), seed};
}

/// Unbiased sample variance, ordered compensated sums.
inline double sample_variance(std::span<const double> values) {
  detail::require(values.size() >= 2, "sample variance needs at least two values");
  const double n = static_cast<double>(values.size());
  const double mean = ordered_sum(values) / n;
  KahanSum<double> squares;
  for (double v : values) squares.add((v - mean) * (v - mean));
  return squares.value() / (n - 1.0);
}

inline double normal_cdf(double x, double variance) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

/// Kolmogorov-Smirnov statistic sup |F_n - F| of `values` against N(0, variance).
inline double ks_statistic_normal(std::span<const double> values, double variance) {
  detail::require(!values.empty(), "KS statistic of an empty sample");
  detail::require(variance > 0.0, "KS reference variance must be positive");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = normal_cdf(sorted[i], variance);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

/// Asymptotic KS critical coefficient c(alpha) = sqrt(-ln(alpha/2)/2); the
/// critical value of the statistic is c / sqrt(n). c(0.01) ~ 1.63.
inline double ks_critical_coefficient(double alpha) {
  detail::require(alpha > 0.0 && alpha < 1.0, "KS significance level must lie in (0, 1)");
  return std::sqrt(-std::log(alpha / 2.0) / 2.0);
}

}  // namespace rzono
