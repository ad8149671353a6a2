#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "rzono/core/ball.hpp"
#include "rzono/dist/directions.hpp"
#include "rzono/dist/distribution.hpp"

using namespace rzono;

namespace {

const Vector e1{1, 0}, e2{0, 1};

DistributionSpec two_atoms() { return DistributionSpec::discrete({e1, e2}, {0.5, 0.5}); }

std::vector<DistributionSpec> all_kinds() {
  return {DistributionSpec::gaussian(3), DistributionSpec::sphere(3, 2.0), DistributionSpec::cube(2, 0.5),
          DistributionSpec::discrete({Vector{1, 2}, Vector{-3, 0.5}, Vector{0, 0}}, {0.2, 0.3, 0.5})};
}

}  // namespace

TEST(Sample, SingleAtomRepeats) {
  const Vector a{1.5, -2};
  const auto xs = sample(DistributionSpec::discrete({a}, {1.0}), 50, {1, 0});
  ASSERT_EQ(xs.size(), 50u);
  for (const auto& x : xs) EXPECT_EQ(x, a);
  EXPECT_TRUE(sample(DistributionSpec::gaussian(2), 0, {1, 0}).empty());
}

TEST(Sample, GaussianCoordinatesAreStandardNormal) {
  const std::size_t n = 1'000'000;
  const auto xs = sample(DistributionSpec::gaussian(2), n, {2, 0});
  for (std::size_t c = 0; c < 2; ++c) {
    KahanSum<double> s, s2;
    for (const auto& x : xs) s.add(x[c]), s2.add(x[c] * x[c]);
    const double mean = s.value() / n;
    const double var = s2.value() / n - mean * mean;
    EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(static_cast<double>(n)));
    EXPECT_LT(std::abs(var - 1.0), 0.01);
  }
}

TEST(Sample, SphereAndCubeSupports) {
  for (const auto& x : sample(DistributionSpec::sphere(3, 1.0), 10000, {3, 0}))
    EXPECT_NEAR(norm(x), 1.0, 1e-12);
  for (const auto& x : sample(DistributionSpec::sphere(4, 2.5), 1000, {3, 1}))
    EXPECT_NEAR(norm(x), 2.5, 1e-12);
  for (const auto& x : sample(DistributionSpec::cube(3, 0.5), 10000, {3, 2}))
    for (double c : x) EXPECT_LT(std::abs(c), 0.5);
}

TEST(Sample, ReproducibleAndStreamSeparated) {
  for (const auto& spec : all_kinds()) {
    EXPECT_EQ(sample(spec, 100, {7, 3}), sample(spec, 100, {7, 3}));
    EXPECT_NE(sample(spec, 100, {7, 3}), sample(spec, 100, {7, 4}));
    EXPECT_NE(sample(spec, 100, {7, 3}), sample(spec, 100, {8, 3}));
  }
}

TEST(Sample, DiscreteFrequenciesMatchProbabilities) {
  const auto spec = DistributionSpec::discrete({Vector{1.0}, Vector{2.0}, Vector{3.0}}, {0.2, 0.5, 0.3});
  const std::size_t n = 200000;
  std::vector<double> counts(3);
  for (const auto& x : sample(spec, n, {4, 0})) counts[static_cast<std::size_t>(x[0]) - 1] += 1;
  for (std::size_t i = 0; i < 3; ++i) {
    const double p = spec.probs[i];
    EXPECT_NEAR(counts[i] / n, p, 4 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(DistributionSpec, ValidationErrors) {
  EXPECT_THROW(DistributionSpec::gaussian(0).validate(), DomainError);
  EXPECT_THROW(DistributionSpec::sphere(2, 0.0).validate(), DomainError);
  EXPECT_THROW(DistributionSpec::sphere(2, INFINITY).validate(), DomainError);
  EXPECT_THROW(DistributionSpec::cube(2, -1.0).validate(), DomainError);
  EXPECT_THROW(DistributionSpec::discrete({}, {}).validate(), DomainError);
  EXPECT_THROW(DistributionSpec::discrete({e1, e2}, {0.5}).validate(), DomainError);
  EXPECT_THROW(DistributionSpec::discrete({e1, e2}, {0.6, 0.5}).validate(), DomainError);
  EXPECT_THROW(DistributionSpec::discrete({e1, e2}, {1.5, -0.5}).validate(), DomainError);
  EXPECT_THROW(DistributionSpec::discrete({e1, Vector{1, 0, 0}}, {0.5, 0.5}).validate(), DomainError);
  EXPECT_NO_THROW(DistributionSpec::discrete({e1, e2}, {0.5, 0.5 + 1e-13}).validate());
  EXPECT_THROW(sample(DistributionSpec::sphere(2, -1.0), 3, {}), DomainError);
}

TEST(ZonoidExactDiscrete, Examples) {
  const auto z = zonoid_exact_discrete(two_atoms());
  ASSERT_EQ(z.size(), 2u);
  EXPECT_EQ(z.generators()[0], (Vector{0.5, 0}));
  EXPECT_EQ(z.generators()[1], (Vector{0, 0.5}));
  EXPECT_DOUBLE_EQ(valuation(z, ValuationSpec::intrinsic(2)), 0.25);

  const Vector a{3, -4};
  const auto point = zonoid_exact_discrete(DistributionSpec::discrete({a}, {1.0}));
  ASSERT_EQ(point.size(), 1u);
  EXPECT_EQ(point.generators()[0], a);

  const auto sym = zonoid_exact_discrete(DistributionSpec::discrete({a, -a}, {0.5, 0.5}));
  EXPECT_NEAR(valuation(sym, ValuationSpec::intrinsic(1)), 5.0, 1e-14);
  EXPECT_NEAR(valuation(sym, ValuationSpec::intrinsic(2)), 0.0, 1e-14);

  EXPECT_THROW(zonoid_exact_discrete(DistributionSpec::gaussian(2)), DomainError);
}

TEST(ZonoidExactDiscrete, SupportIsExpectedSegmentSupport) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<Vector> atoms;
    std::vector<double> probs;
    double total = 0;
    for (int i = 0; i < 6; ++i) {
      atoms.push_back(Vector{normal(rng), normal(rng), normal(rng)});
      probs.push_back(unif(rng));
      total += probs.back();
    }
    for (auto& p : probs) p /= total;
    const auto spec = DistributionSpec::discrete(atoms, probs);
    const auto z = zonoid_exact_discrete(spec);
    for (int k = 0; k < 20; ++k) {
      const Vector u{normal(rng), normal(rng), normal(rng)};
      double expected = 0;
      for (std::size_t i = 0; i < atoms.size(); ++i) expected += probs[i] * std::max(dot(atoms[i], u), 0.0);
      EXPECT_NEAR(support_function(z, u), expected, 1e-12);
    }
  }
}

TEST(ZonoidExactDiscrete, DegenerateSupportHasVanishingValuation) {
  // atoms on the line spanned by (1, 2, -1): rank 1 < j
  const Vector dir{1, 2, -1};
  const auto line = DistributionSpec::discrete({dir, 3.0 * dir, -0.5 * dir}, {0.3, 0.3, 0.4});
  const auto z = zonoid_exact_discrete(line);
  EXPECT_GT(valuation(z, ValuationSpec::intrinsic(1)), 0.0);
  EXPECT_NEAR(valuation(z, ValuationSpec::intrinsic(2)), 0.0, 1e-14);
  EXPECT_NEAR(valuation(z, ValuationSpec::intrinsic(3)), 0.0, 1e-14);
  // atoms in the plane z = 0: rank 2 < 3
  const auto plane = DistributionSpec::discrete({Vector{1, 0, 0}, Vector{0, 1, 0}, Vector{1, 1, 0}}, {0.2, 0.3, 0.5});
  EXPECT_GT(valuation(zonoid_exact_discrete(plane), ValuationSpec::intrinsic(2)), 0.0);
  EXPECT_NEAR(valuation(zonoid_exact_discrete(plane), ValuationSpec::intrinsic(3)), 0.0, 1e-15);
}

TEST(GaussianRadius, ConstantIsTheHalfNormalMean) {
  EXPECT_NEAR(kGaussianZonoidRadius, 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-16);
  for (int d = 1; d <= 8; ++d) EXPECT_EQ(zonoid_gaussian_radius(d), kGaussianZonoidRadius);
  EXPECT_THROW(zonoid_gaussian_radius(0), DomainError);
}

TEST(GaussianRadius, MonteCarloOracleAgrees) {
  const auto oracle = gaussian_radius_oracle(10'000'000, {21, stream_role::radius_oracle}, 4);
  EXPECT_NEAR(oracle.std_error, 1.9e-4, 0.1e-4);
  EXPECT_LT(std::abs(oracle.mean - kGaussianZonoidRadius), 4 * oracle.std_error);
  // the competing closed form sits hundreds of standard errors away
  EXPECT_GT(std::abs(oracle.mean - gaussian_radius_quarter_candidate()), 1000 * oracle.std_error);
}

TEST(GaussianRadius, OracleIndependentOfThreads) {
  const SeedSpec seed{22, 0};
  const auto one = gaussian_radius_oracle(300'000, seed, 1);
  const auto many = gaussian_radius_oracle(300'000, seed, 5);
  EXPECT_EQ(one.mean, many.mean);
  EXPECT_EQ(one.std_error, many.std_error);
}

TEST(GaussianRadius, EmpiricalSupportWithinThreeStandardErrors) {
  const std::size_t n = 100'000;
  const auto zn = zonoid_empirical(DistributionSpec::gaussian(3), n, {23, 0});
  // sd of max(N(0,1), 0): second moment 1/2 minus R^2
  const double se = std::sqrt(0.5 - kGaussianZonoidRadius * kGaussianZonoidRadius) / std::sqrt(double(n));
  EXPECT_LT(std::abs(support_function(zn, Vector{1, 0, 0}) - kGaussianZonoidRadius), 3 * se);
}

TEST(ZonoidEmpirical, Examples) {
  const Vector a{0.5, 2};
  const auto single = zonoid_empirical(DistributionSpec::discrete({a}, {1.0}), 17, {1, 0});
  const std::vector<Vector> dirs = direction_grid(2, 64);
  EXPECT_LT(hausdorff_upper_bound(single, Zonotope(std::vector<Vector>{a}), dirs), 1e-14);

  const std::size_t n = 100'000;
  const auto zn = zonoid_empirical(two_atoms(), n, {24, 0});
  EXPECT_LT(std::abs(support_function(zn, e1) - 0.5), 3 * 0.5 / std::sqrt(double(n)));
  EXPECT_THROW(zonoid_empirical(two_atoms(), 0, {}), DomainError);
}

TEST(ZonoidEmpirical, GaussianConvergesToBallInHausdorffDistance) {
  const auto zn = zonoid_empirical(DistributionSpec::gaussian(2), 100'000, {25, 0});
  const auto dirs = direction_grid(2, 360);
  const double ball = kGaussianZonoidRadius;
  const double distance = hausdorff_estimate([&](const Vector& u) { return support_function(zn, u); },
                                             [&](const Vector&) { return ball; }, dirs);
  EXPECT_LT(distance, 0.01);
}

TEST(ZonoidEmpirical, GaussianZonoidIsSpherical) {
  const std::size_t n = 100'000;
  const auto zn = zonoid_empirical(DistributionSpec::gaussian(3), n, {26, 0});
  const double se = std::sqrt(0.5 - kGaussianZonoidRadius * kGaussianZonoidRadius) / std::sqrt(double(n));
  std::vector<double> h;
  std::mt19937_64 rng(26);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 100; ++k) {
    const Vector u{normal(rng), normal(rng), normal(rng)};
    h.push_back(support_function(zn, (1.0 / norm(u)) * u));
  }
  double mean = 0;
  for (double v : h) mean += v / 100;
  for (double v : h) EXPECT_LT(std::abs(v - mean), 5 * se);
}

TEST(NormMoments, ClosedForms) {
  EXPECT_NEAR(gaussian_norm_moments(1).mean, std::sqrt(2 / std::numbers::pi), 1e-15);
  EXPECT_NEAR(gaussian_norm_moments(2).mean, std::sqrt(std::numbers::pi / 2), 1e-15);
  for (int d = 1; d <= 12; ++d) {
    const auto m = gaussian_norm_moments(d);
    EXPECT_EQ(m.second_moment, double(d));
    // chi mean: sqrt(2) Gamma((d+1)/2) / Gamma(d/2)
    EXPECT_NEAR(m.mean, std::sqrt(2.0) * std::exp(std::lgamma((d + 1) / 2.0) - std::lgamma(d / 2.0)), 1e-13);
    EXPECT_LE(m.mean * m.mean, m.second_moment);
  }
  EXPECT_THROW(gaussian_norm_moments(0), DomainError);
}

TEST(NormMoments, MonteCarloCrossCheck) {
  for (int d : {1, 2, 5}) {
    const std::size_t n = 400'000;
    const auto xs = sample(DistributionSpec::gaussian(d), n, {27, static_cast<std::uint64_t>(d)});
    std::vector<double> norms;
    for (const auto& x : xs) norms.push_back(norm(x));
    const auto est = summarize(norms, {});
    EXPECT_LT(std::abs(est.mean - gaussian_norm_moments(d).mean), 4 * est.std_error) << d;
  }
}

TEST(NormMoments, JensenHoldsForEveryKind) {
  for (const auto& spec : all_kinds()) {
    KahanSum<double> s, s2;
    const std::size_t n = 50'000;
    for (const auto& x : sample(spec, n, {28, 0})) {
      const double r = norm(x);
      s.add(r);
      s2.add(r * r);
    }
    const double m1 = s.value() / n, m2 = s2.value() / n;
    EXPECT_LE(m1 * m1, m2 * (1 + 1e-12)) << to_string(spec.kind);
  }
}

TEST(DirectionGrid, UnitVectorsAndDeterminism) {
  for (int d = 1; d <= 5; ++d) {
    const auto dirs = direction_grid(d, 37, {29, 0});
    ASSERT_EQ(dirs.size(), 37u);
    for (const auto& u : dirs) EXPECT_NEAR(norm(u), 1.0, 1e-14);
    EXPECT_EQ(dirs, direction_grid(d, 37, {29, 0}));
  }
  const auto circle = direction_grid(2, 4);
  EXPECT_NEAR(circle[1][0], 0.0, 1e-15);
  EXPECT_NEAR(circle[1][1], 1.0, 1e-15);
  EXPECT_THROW(direction_grid(2, 0), DomainError);
  EXPECT_THROW(direction_grid(0, 3), DomainError);
}
