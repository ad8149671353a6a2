#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rzono/core/error.hpp"
#include "rzono/core/numeric.hpp"
#include "rzono/core/parallel.hpp"
#include "rzono/core/statistics.hpp"
#include "rzono/core/zonotope.hpp"
#include "rzono/dist/distribution.hpp"
#include "rzono/estimators/montecarlo.hpp"
#include "rzono/estimators/surrogate.hpp"
#include "rzono/estimators/ustat.hpp"

namespace rzono {

struct CltOptions {
  std::uint64_t n = 2000;
  std::uint64_t reps = 2000;
  SeedSpec seed;
  /// When set, phi(Z_n) is estimated from this many random j-subsets whenever
  /// the exact C(n, j) enumeration exceeds the term budget.
  std::optional<std::uint64_t> subsample_draws;
  std::size_t surrogate_n = 100'000;
  std::uint64_t zeta_reps = 100'000;
  double variance_tolerance = 0.10;
  double ks_alpha = 0.01;
  ExecutionOptions execution;
};

/// Outcome of a CLT campaign for sqrt(n)(phi(Z_n) - phi(Z_X)).
struct CltReport {
  std::vector<double> deviations;
  double empirical_variance = 0.0;
  double predicted_variance = 0.0;  // (j! j)^2 zeta_1
  double ks_statistic = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t n = 0;
  std::uint64_t reps = 0;

  double deviation_mean = 0.0;
  double zeta1 = 0.0;
  double zeta1_stderr = 0.0;
  std::string zeta1_source;
  double theta = 0.0;
  double phi_zx = 0.0;
  std::string surrogate;
  double surrogate_error = 0.0;
  bool degenerate = false;
  double variance_ratio = std::numeric_limits<double>::quiet_NaN();
  /// j^2 zeta_1 / (j!)^2: the variance obtained by scaling the U-statistic
  /// CLT with C(n,j)/n^j -> 1/j!. Equal to predicted_variance for j = 1.
  double alternative_variance = 0.0;
  double alternative_ratio = std::numeric_limits<double>::quiet_NaN();
  double variance_tolerance = 0.0;
  double ks_critical = 0.0;
  bool variance_pass = false;
  bool ks_pass = false;
  bool passed = false;
  std::string phi_path;
  Lemma41Diagnosis lemma41;
  std::vector<std::string> warnings;
};

/// zeta_1 at or below this multiple of max(1, theta^2) is treated as zero.
inline constexpr double kDegenerateZeta1 = 1e-12;

/// Simulates `reps` independent deviations sqrt(n)(phi(Z_n) - phi(Z_X)) and
/// compares them with N(0, (j! j)^2 zeta_1).
///
/// Sub-streams of options.seed: replication r uses
/// substream(replications).substream(r); the empirical surrogate and the
/// Monte Carlo zeta_1 have their own roles.
inline CltReport clt_experiment(const DistributionSpec& spec, const ValuationSpec& valuation_spec,
                                const CltOptions& options) {
  spec.validate();
  valuation_spec.validate(spec.d());
  detail::require(options.n >= 1, "clt_experiment: n must be >= 1");
  detail::require(options.reps >= 2, "clt_experiment: reps must be >= 2");
  detail::require(options.variance_tolerance > 0.0, "clt_experiment: variance tolerance must be > 0");
  const std::size_t j = valuation_spec.j();
  const std::size_t d = spec.d();
  const auto& exec = options.execution;

  CltReport report;
  report.n = options.n;
  report.reps = options.reps;
  report.variance_tolerance = options.variance_tolerance;
  report.lemma41 = lemma41_precheck(spec, valuation_spec.degree);
  for (const auto& reason : report.lemma41.reasons) report.warnings.push_back("lemma41 precheck failed: " + reason);
  if (valuation_spec.kind == ValuationKind::mixed)
    report.warnings.push_back("mixed valuations may vanish on some bodies of dimension >= j; zeta_1 > 0 is not guaranteed");

  const auto zx = make_surrogate(spec, valuation_spec, options.surrogate_n, options.seed.substream(stream_role::surrogate), exec);
  report.surrogate = zx.name();
  report.surrogate_error = zx.error_estimate();
  report.phi_zx = zx.valuation(valuation_spec, exec);
  report.theta = theta(valuation_spec, zx, exec);

  if (spec.kind == DistributionKind::gaussian_std && valuation_spec.kind == ValuationKind::intrinsic) {
    report.zeta1 = zeta1_gaussian_closed_form(spec.dim, valuation_spec.degree, zx.radius()).zeta1;
    report.zeta1_source = "gaussian_closed_form";
  } else if (spec.kind == DistributionKind::discrete) {
    report.zeta1 = zeta1_exact_discrete(spec, valuation_spec, exec);
    report.zeta1_source = "exact_discrete";
  } else {
    const auto est = zeta1_mc(spec, valuation_spec, zx, options.zeta_reps, options.seed.substream(stream_role::zeta), exec);
    report.zeta1 = est.zeta1.mean;
    report.zeta1_stderr = est.zeta1.std_error;
    report.zeta1_source = "monte_carlo";
  }

  const double jfact = to_double(factorial(j));
  const double jd = static_cast<double>(j);
  report.predicted_variance = (jfact * jd) * (jfact * jd) * report.zeta1;
  report.alternative_variance = jd * jd / (jfact * jfact) * report.zeta1;
  report.degenerate = report.zeta1 <= kDegenerateZeta1 * std::max(1.0, report.theta * report.theta);

  // phi(Z_n): exact subset sum when affordable, otherwise a subsampled
  // order-j U-statistic scaled by C(n, j)/n^j.
  const bool exact_path = binomial(options.n, j) <= exec.term_budget;
  if (!exact_path && !options.subsample_draws)
    throw CapacityError("clt_experiment: C(n, j) exceeds the term budget and no subsampling was requested");
  report.phi_path = exact_path ? "exact" : "subsampled_ustat";
  const KernelContext ctx(valuation_spec, j, d);
  const double scale_factor = exact_path ? 0.0 : to_double(binomial(options.n, j)) *
                                                     std::pow(1.0 / static_cast<double>(options.n), static_cast<double>(j));
  const double root_n = std::sqrt(static_cast<double>(options.n));
  const SeedSpec rep_root = options.seed.substream(stream_role::replications);
  ExecutionOptions inner = exec;
  inner.threads = 1;

  report.deviations.assign(options.reps, 0.0);
  parallel_for(options.reps, exec.threads, [&](std::size_t r) {
    const SeedSpec rep_seed = rep_root.substream(r);
    auto points = sample(spec, options.n, rep_seed);
    double phi_zn;
    if (exact_path) {
      phi_zn = valuation(Zonotope(d, std::move(points), 1.0 / static_cast<double>(options.n)), valuation_spec, inner);
    } else {
      phi_zn = scale_factor *
               u_statistic_subsample(ctx, points, *options.subsample_draws, rep_seed.substream(stream_role::subsample)).mean;
    }
    report.deviations[r] = root_n * (phi_zn - report.phi_zx);
  });

  report.deviation_mean = ordered_sum<double>(report.deviations) / static_cast<double>(options.reps);
  report.empirical_variance = sample_variance(report.deviations);
  report.ks_critical = ks_critical_coefficient(options.ks_alpha) / std::sqrt(static_cast<double>(options.reps));

  if (report.degenerate) {
    report.warnings.push_back("zeta_1 is numerically zero: the limit law is degenerate");
    return report;
  }
  report.variance_ratio = report.empirical_variance / report.predicted_variance;
  report.alternative_ratio = report.empirical_variance / report.alternative_variance;
  // Monte Carlo zeta_1 carries its own error; fold three standard errors in.
  const double tolerance =
      options.variance_tolerance + (report.zeta1_stderr > 0.0 ? 3.0 * report.zeta1_stderr / report.zeta1 : 0.0);
  report.variance_tolerance = tolerance;
  report.variance_pass = std::abs(report.variance_ratio - 1.0) <= tolerance;
  report.ks_statistic = ks_statistic_normal(report.deviations, report.predicted_variance);
  report.ks_pass = report.ks_statistic < report.ks_critical;
  report.passed = report.variance_pass && report.ks_pass;
  if (!report.variance_pass && j >= 2 && std::abs(report.alternative_ratio - 1.0) <= tolerance)
    report.warnings.push_back("measured variance matches j^2 zeta_1/(j!)^2 rather than (j! j)^2 zeta_1");
  return report;
}

}  // namespace rzono
