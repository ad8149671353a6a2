#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rzono/estimators/clt.hpp"

using namespace rzono;

namespace {

const Vector o2{0, 0}, e1{1, 0}, e2{0, 1};

CltOptions options(std::uint64_t n, std::uint64_t reps, std::uint64_t seed, unsigned threads = 4) {
  CltOptions opt;
  opt.n = n;
  opt.reps = reps;
  opt.seed = {seed, 0};
  opt.execution.threads = threads;
  return opt;
}

}  // namespace

TEST(Clt, DiscreteThreeAtomsMatchesExactZeta) {
  const auto spec = DistributionSpec::discrete({o2, e1, e2}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto report = clt_experiment(spec, ValuationSpec::intrinsic(1), options(1000, 2000, 31));
  EXPECT_EQ(report.zeta1_source, "exact_discrete");
  EXPECT_NEAR(report.zeta1, 2.0 / 9, 1e-15);
  EXPECT_NEAR(report.predicted_variance, 2.0 / 9, 1e-15);
  EXPECT_EQ(report.deviations.size(), 2000u);
  EXPECT_TRUE(report.lemma41.pass);
  EXPECT_FALSE(report.degenerate);
  EXPECT_TRUE(report.variance_pass) << report.variance_ratio;
  EXPECT_TRUE(report.ks_pass) << report.ks_statistic;
}

TEST(Clt, GaussianFirstDegreeSmallScale) {
  const auto report = clt_experiment(DistributionSpec::gaussian(2), ValuationSpec::intrinsic(1), options(500, 1000, 32));
  EXPECT_EQ(report.zeta1_source, "gaussian_closed_form");
  EXPECT_NEAR(report.zeta1, 2 - std::numbers::pi / 2, 1e-14);
  EXPECT_EQ(report.phi_path, "exact");
  EXPECT_TRUE(report.passed) << report.variance_ratio << " " << report.ks_statistic;
  EXPECT_NEAR(report.ks_critical, std::sqrt(-std::log(0.005) / 2) / std::sqrt(1000.0), 1e-15);
}

TEST(Clt, SingleAtomIsDegenerate) {
  const auto spec = DistributionSpec::discrete({Vector{1, 2}}, {1.0});
  const auto report = clt_experiment(spec, ValuationSpec::intrinsic(1), options(100, 50, 33));
  EXPECT_TRUE(report.degenerate);
  EXPECT_EQ(report.zeta1, 0.0);
  for (double dev : report.deviations) EXPECT_NEAR(dev, 0.0, 1e-12);
  EXPECT_TRUE(std::isnan(report.ks_statistic));
  EXPECT_FALSE(report.passed);
  EXPECT_FALSE(report.warnings.empty());
  EXPECT_FALSE(report.lemma41.pass);
}

TEST(Clt, SecondDegreeVarianceFollowsUStatisticScaling) {
  // For j = 2 the measured variance sits at j^2 zeta_1 / (j!)^2, a sixteenth of
  // (j! j)^2 zeta_1. The report must say so rather than pass.
  auto opt = options(300, 1000, 34);
  const auto report = clt_experiment(DistributionSpec::gaussian(2), ValuationSpec::intrinsic(2), opt);
  EXPECT_NEAR(report.predicted_variance, 16 * report.zeta1, 1e-12);
  EXPECT_NEAR(report.alternative_variance, report.zeta1, 1e-15);
  EXPECT_FALSE(report.variance_pass);
  EXPECT_LT(std::abs(report.alternative_ratio - 1.0), 0.15) << report.alternative_ratio;
  bool warned = false;
  for (const auto& w : report.warnings) warned = warned || w.find("j^2 zeta_1/(j!)^2") != std::string::npos;
  EXPECT_TRUE(warned);
}

TEST(Clt, SubsampledPathWhenOverBudget) {
  auto opt = options(5000, 20, 35);
  opt.execution.term_budget = 1'000'000;
  EXPECT_THROW(clt_experiment(DistributionSpec::gaussian(2), ValuationSpec::intrinsic(2), opt), CapacityError);
  opt.subsample_draws = 4000;
  const auto report = clt_experiment(DistributionSpec::gaussian(2), ValuationSpec::intrinsic(2), opt);
  EXPECT_EQ(report.phi_path, "subsampled_ustat");
  for (double dev : report.deviations) EXPECT_TRUE(std::isfinite(dev));
}

TEST(Clt, MonteCarloZetaForContinuousNonGaussian) {
  auto opt = options(400, 400, 36);
  opt.surrogate_n = 20'000;
  opt.zeta_reps = 20'000;
  const auto report = clt_experiment(DistributionSpec::cube(2, 1.0), ValuationSpec::intrinsic(1), opt);
  EXPECT_EQ(report.zeta1_source, "monte_carlo");
  EXPECT_EQ(report.surrogate, "empirical");
  EXPECT_GT(report.zeta1_stderr, 0.0);
  EXPECT_GT(report.variance_tolerance, 0.10);
}

TEST(Clt, SphereWarnsAboutPrecheck) {
  auto opt = options(50, 20, 37);
  opt.surrogate_n = 2000;
  opt.zeta_reps = 2000;
  const auto report = clt_experiment(DistributionSpec::sphere(2, 1.0), ValuationSpec::intrinsic(1), opt);
  EXPECT_FALSE(report.lemma41.pass);
  ASSERT_FALSE(report.warnings.empty());
  EXPECT_NE(report.warnings.front().find("origin"), std::string::npos);
}

TEST(Clt, DeviationsIndependentOfThreadCount) {
  const auto spec = DistributionSpec::gaussian(3);
  const auto one = clt_experiment(spec, ValuationSpec::intrinsic(2), options(60, 64, 38, 1));
  const auto many = clt_experiment(spec, ValuationSpec::intrinsic(2), options(60, 64, 38, 6));
  EXPECT_EQ(one.deviations, many.deviations);
  EXPECT_EQ(one.empirical_variance, many.empirical_variance);
}

TEST(Clt, InvalidOptions) {
  const auto spec = DistributionSpec::gaussian(2);
  EXPECT_THROW(clt_experiment(spec, ValuationSpec::intrinsic(1), options(10, 1, 39)), DomainError);
  EXPECT_THROW(clt_experiment(spec, ValuationSpec::intrinsic(1), options(0, 10, 39)), DomainError);
  EXPECT_THROW(clt_experiment(spec, ValuationSpec::intrinsic(3), options(10, 10, 39)), DomainError);
}

TEST(KsStatistic, Examples) {
  EXPECT_NEAR(ks_critical_coefficient(0.01), 1.6276, 1e-4);
  const std::vector<double> mid{0.0};
  EXPECT_NEAR(ks_statistic_normal(mid, 1.0), 0.5, 1e-15);
  // evenly spaced normal quantiles give the minimal statistic 1/(2m)
  std::vector<double> quantiles;
  const int m = 200;
  for (int i = 0; i < m; ++i) {
    const double q = (i + 0.5) / m;
    double lo = -10, hi = 10;
    for (int it = 0; it < 200; ++it) {
      const double mid_x = (lo + hi) / 2;
      (normal_cdf(mid_x, 2.0) < q ? lo : hi) = mid_x;
    }
    quantiles.push_back(lo);
  }
  EXPECT_NEAR(ks_statistic_normal(quantiles, 2.0), 0.5 / m, 1e-9);
}
