#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "rzono/core/combination.hpp"
#include "rzono/core/numeric.hpp"
#include "rzono/core/parallel.hpp"
#include "rzono/core/zonotope.hpp"

using namespace rzono;

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binomial(0, 0), 1u);
  EXPECT_EQ(binomial(5, 2), 10u);
  EXPECT_EQ(binomial(10, 3), 120u);
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(52, 5), 2598960u);
}

TEST(Binomial, PascalRule) {
  for (std::uint64_t n = 1; n < 70; ++n)
    for (std::uint64_t k = 1; k < n; ++k) EXPECT_EQ(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
}

TEST(Binomial, LargeExactAndOverflow) {
  // C(100, 50) = 100891344545564193334812497256
  EXPECT_EQ(to_string(binomial(100, 50)), "100891344545564193334812497256");
  EXPECT_THROW(binomial(200, 100), DomainError);
}

TEST(Factorials, Values) {
  EXPECT_EQ(factorial(0), 1u);
  EXPECT_EQ(factorial(6), 720u);
  EXPECT_EQ(falling_factorial(10, 3), 720u);
  EXPECT_EQ(to_string(factorial(30)), "265252859812191058636308480000000");
}

TEST(Kahan, RecoversSmallTerms) {
  KahanSum<double> acc;
  acc.add(1.0);
  for (int i = 0; i < 1000; ++i) acc.add(1e-16);
  acc.add(-1.0);
  EXPECT_NEAR(acc.value(), 1e-13, 1e-25);
}

TEST(Combination, LexicographicEnumerationMatchesUnranking) {
  for (std::size_t n = 1; n <= 9; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      std::vector<std::size_t> idx(k);
      for (std::size_t i = 0; i < k; ++i) idx[i] = i;
      std::uint64_t rank = 0;
      std::set<std::vector<std::size_t>> seen;
      do {
        EXPECT_EQ(unrank_combination(rank, n, k), idx);
        EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
        seen.insert(idx);
        ++rank;
      } while (next_combination(idx, n));
      EXPECT_EQ(rank, static_cast<std::uint64_t>(binomial(n, k)));
      EXPECT_EQ(seen.size(), rank);
    }
  }
}

TEST(SubsetSum, ResultIsBitwiseIndependentOfThreadCount) {
  // many terms of mixed magnitude so that the summation order matters
  const std::size_t n = 60;
  auto term = [](std::span<const std::size_t> idx, SubsetTerm::Workspace&) {
    const double v = static_cast<double>(idx[0] * 7919 + idx[1] * 104729 + idx[2]);
    return (idx[0] % 2 == 0 ? 1e12 : 1e-3) * std::sin(v);
  };
  ExecutionOptions one{1, 100'000'000};
  const double reference = sum_over_subsets<SubsetTerm::Workspace>(n, 3, one, term);
  for (unsigned threads : {2u, 3u, 8u}) {
    ExecutionOptions opt{threads, 100'000'000};
    const double value = sum_over_subsets<SubsetTerm::Workspace>(n, 3, opt, term);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(value), std::bit_cast<std::uint64_t>(reference)) << threads;
  }
}

TEST(SubsetSum, RefusesAboveBudget) {
  ExecutionOptions opt{1, 1000};
  auto term = [](std::span<const std::size_t>, SubsetTerm::Workspace&) { return 1.0; };
  EXPECT_DOUBLE_EQ((sum_over_subsets<SubsetTerm::Workspace>(20, 2, opt, term)), 190.0);
  EXPECT_THROW((sum_over_subsets<SubsetTerm::Workspace>(200, 2, opt, term)), CapacityError);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 37) throw DomainError("boom");
                            }),
               DomainError);
}
