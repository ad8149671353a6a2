#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rzono/core/error.hpp"
#include "rzono/core/numeric.hpp"
#include "rzono/core/parallel.hpp"
#include "rzono/core/statistics.hpp"
#include "rzono/core/zonotope.hpp"
#include "rzono/random/philox.hpp"

namespace rzono {

/// Kernel h(x_1, ..., x_p) = phi(x_1bar + ... + x_pbar) of order p >= j.
class KernelContext {
public:
  KernelContext(ValuationSpec spec, std::size_t p, std::size_t d) : spec_(std::move(spec)), p_(p), d_(d) {
    spec_.validate(d_);
    detail::require(p_ >= spec_.j(), "kernel order p=" + std::to_string(p_) + " is below the valuation degree j=" +
                                         std::to_string(spec_.j()) + "; such kernels vanish identically");
  }

  [[nodiscard]] const ValuationSpec& spec() const { return spec_; }
  [[nodiscard]] std::size_t p() const { return p_; }
  [[nodiscard]] std::size_t j() const { return spec_.j(); }
  [[nodiscard]] std::size_t dim() const { return d_; }

private:
  ValuationSpec spec_;
  std::size_t p_;
  std::size_t d_;
};

namespace detail {

inline void check_points(const KernelContext& ctx, std::span<const Vector> points) {
  for (const auto& x : points) require_dim(x, ctx.dim(), "sample point");
}

}  // namespace detail

inline double kernel_h(const KernelContext& ctx, std::span<const Vector> points) {
  detail::require(points.size() == ctx.p(), "kernel_h: expected " + std::to_string(ctx.p()) + " points, got " +
                                                std::to_string(points.size()));
  detail::check_points(ctx, points);
  const SubsetTerm term(ctx.spec(), ctx.dim());
  std::vector<const double*> gens;
  for (const auto& x : points) gens.push_back(x.data());
  SubsetTerm::Workspace ws;
  return detail::subset_valuation_sum(gens, term, ws);
}

/// Selects how u_statistic averages the kernel.
struct UStatMode {
  struct Subsample {
    std::uint64_t draws = 0;
    SeedSpec seed;
  };
  std::optional<Subsample> subsample;

  static UStatMode exact() { return {}; }
  static UStatMode sampled(std::uint64_t draws, const SeedSpec& seed) { return {Subsample{draws, seed}}; }
};

/// C(n,p)^{-1} times the sum of h over all p-subsets of the sample.
inline double u_statistic_exact(const KernelContext& ctx, std::span<const Vector> sample,
                                const ExecutionOptions& options = {}) {
  const std::size_t n = sample.size();
  const std::size_t p = ctx.p();
  detail::require(n >= p, "u_statistic: sample size " + std::to_string(n) + " is below the kernel order " +
                              std::to_string(p));
  detail::check_points(ctx, sample);
  const SubsetTerm term(ctx.spec(), ctx.dim());
  std::vector<const double*> gens;
  for (const auto& x : sample) gens.push_back(x.data());
  const double total = sum_over_subsets<SubsetTerm::Workspace>(
      n, p, options,
      [&](std::span<const std::size_t> idx, SubsetTerm::Workspace& ws) {
        std::vector<const double*> chosen(p);
        for (std::size_t i = 0; i < p; ++i) chosen[i] = gens[idx[i]];
        return detail::subset_valuation_sum(chosen, term, ws);
      },
      static_cast<std::uint64_t>(binomial(p, ctx.j())), "u_statistic");
  return total / to_double(binomial(n, p));
}

/// Mean of h over `draws` p-subsets, each drawn uniformly (with replacement
/// across draws; Floyd's algorithm within a draw). Unbiased for the exact
/// U-statistic.
inline EstimateResult u_statistic_subsample(const KernelContext& ctx, std::span<const Vector> sample,
                                            std::uint64_t draws, const SeedSpec& seed) {
  const std::size_t n = sample.size();
  const std::size_t p = ctx.p();
  detail::require(n >= p, "u_statistic: sample size is below the kernel order");
  detail::require(draws >= 2, "u_statistic: subsampling needs at least two draws");
  detail::check_points(ctx, sample);
  const SubsetTerm term(ctx.spec(), ctx.dim());
  RandomStream rng(seed);
  std::vector<double> values(draws);
  std::vector<std::size_t> chosen;
  std::vector<const double*> cols(p);
  SubsetTerm::Workspace ws;
  for (auto& value : values) {
    chosen.clear();
    for (std::size_t m = n - p; m < n; ++m) {
      const auto t = static_cast<std::size_t>(rng.below(m + 1));
      bool taken = false;
      for (auto c : chosen) taken = taken || c == t;
      chosen.push_back(taken ? m : t);
    }
    for (std::size_t i = 0; i < p; ++i) cols[i] = sample[chosen[i]].data();
    value = detail::subset_valuation_sum(cols, term, ws);
  }
  return summarize(values, seed);
}

inline double u_statistic(const KernelContext& ctx, std::span<const Vector> sample, const UStatMode& mode,
                          const ExecutionOptions& options = {}) {
  if (mode.subsample) return u_statistic_subsample(ctx, sample, mode.subsample->draws, mode.subsample->seed).mean;
  return u_statistic_exact(ctx, sample, options);
}

/// n^{-j} C(n-j, p-j)^{-1} C(n, p) = [n (n-1) ... (n-j+1) / n^j] (p-j)!/p!.
inline double zn_scaling_factor(std::uint64_t n, std::uint64_t j, std::uint64_t p) {
  detail::require(j <= p && p <= n, "zn_scaling_factor: need j <= p <= n");
  long double falling = 1.0L;
  for (std::uint64_t i = 0; i < j; ++i)
    falling *= static_cast<long double>(n - i) / static_cast<long double>(n);
  long double ratio = 1.0L;
  for (std::uint64_t k = p - j + 1; k <= p; ++k) ratio /= static_cast<long double>(k);
  return static_cast<double>(falling * ratio);
}

/// Large-n limit (p-j)!/p! of zn_scaling_factor.
inline double zn_scaling_limit(std::uint64_t j, std::uint64_t p) {
  detail::require(j <= p, "zn_scaling_limit: need j <= p");
  return 1.0 / to_double(falling_factorial(p, j));
}

/// phi(Z_n) from the order-p U-statistic of the sample.
inline double valuation_of_Zn_via_ustat(const KernelContext& ctx, std::span<const Vector> sample,
                                        const ExecutionOptions& options = {}) {
  const std::size_t n = sample.size();
  if (n < ctx.j()) return 0.0;
  detail::require(ctx.p() <= n, "valuation_of_Zn_via_ustat: need p <= n");
  return zn_scaling_factor(n, ctx.j(), ctx.p()) * u_statistic_exact(ctx, sample, options);
}

}  // namespace rzono
