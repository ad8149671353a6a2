#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rzono/core/ball.hpp"
#include "rzono/core/error.hpp"
#include "rzono/core/linalg.hpp"
#include "rzono/core/numeric.hpp"
#include "rzono/core/parallel.hpp"
#include "rzono/core/statistics.hpp"
#include "rzono/core/zonotope.hpp"
#include "rzono/dist/distribution.hpp"
#include "rzono/estimators/surrogate.hpp"
#include "rzono/estimators/ustat.hpp"

namespace rzono {

/// p! / (p^j (p-j)!): E phi(Z_p) in units of phi(Z_X).
inline double theorem1_factor(int j, int p) {
  detail::require(j >= 1, "theorem1_factor: need j >= 1");
  detail::require(p >= j, "theorem1_factor: need p >= j");
  const auto pu = static_cast<std::uint64_t>(p);
  return to_double(falling_factorial(pu, static_cast<std::uint64_t>(j))) / std::pow(static_cast<double>(p), j);
}

inline double theorem1_prediction(double phi_at_zx, int j, int p) { return theorem1_factor(j, p) * phi_at_zx; }

/// Monte Carlo estimate of E phi(Z_p), Z_p = (1/p)(X_1bar + ... + X_pbar).
/// Replication r draws its points from seed.substream(r).
inline EstimateResult estimate_expected_valuation_Zp(const DistributionSpec& spec, const KernelContext& ctx,
                                                     std::uint64_t reps, const SeedSpec& seed,
                                                     const ExecutionOptions& options = {}) {
  spec.validate();
  detail::require(reps >= 2, "estimate_expected_valuation_Zp: need reps >= 2");
  detail::require(ctx.dim() == spec.d(), "estimate_expected_valuation_Zp: dimension mismatch");
  detail::check_budget(binomial(ctx.p(), ctx.j()), options, "estimate_expected_valuation_Zp");
  const double scale = 1.0 / static_cast<double>(ctx.p());
  const double scale_j = std::pow(scale, static_cast<double>(ctx.j()));
  std::vector<double> values(reps);
  const SubsetTerm term(ctx.spec(), ctx.dim());
  constexpr std::uint64_t kBlock = 1024;
  const std::uint64_t blocks = (reps + kBlock - 1) / kBlock;
  parallel_for(blocks, options.threads, [&](std::size_t b) {
    SubsetTerm::Workspace ws;
    std::vector<double> flat(ctx.p() * ctx.dim());
    std::vector<const double*> gens(ctx.p());
    for (std::uint64_t r = b * kBlock; r < std::min(reps, (b + 1) * kBlock); ++r) {
      Sampler sampler(spec, seed.substream(r));
      for (std::size_t i = 0; i < ctx.p(); ++i) {
        sampler.next_into(std::span<double>(flat).subspan(i * ctx.dim(), ctx.dim()));
        gens[i] = flat.data() + i * ctx.dim();
      }
      values[r] = scale_j * detail::subset_valuation_sum(gens, term, ws);
    }
  });
  return summarize(values, seed);
}

struct Theorem1Report {
  EstimateResult estimate;
  double prediction = 0.0;
  double factor = 0.0;
  double phi_zx = 0.0;
  double z_score = 0.0;
  std::string surrogate;
  double surrogate_error = 0.0;
};

/// (estimate - prediction) / stderr; a zero-variance estimate scores 0 when it
/// matches the prediction to 1e-12 relative and +-infinity otherwise.
inline double z_score(double mean, double std_error, double target) {
  const double diff = mean - target;
  if (std_error > 0.0) return diff / std_error;
  if (std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(target))) return 0.0;
  return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

/// Compares the Monte Carlo E phi(Z_p) with p!/(p^j (p-j)!) phi(Z_X).
/// Replications use seed.substream(stream_role::replications).
inline Theorem1Report verify_theorem1(const DistributionSpec& spec, const ValuationSpec& valuation_spec, int p,
                                      std::uint64_t reps, const SeedSpec& seed, const ZonoidSurrogate& surrogate,
                                      const ExecutionOptions& options = {}) {
  const KernelContext ctx(valuation_spec, static_cast<std::size_t>(p), spec.d());
  Theorem1Report report;
  report.estimate =
      estimate_expected_valuation_Zp(spec, ctx, reps, seed.substream(stream_role::replications), options);
  report.phi_zx = surrogate.valuation(valuation_spec, options);
  report.factor = theorem1_factor(valuation_spec.degree, p);
  report.prediction = report.factor * report.phi_zx;
  report.z_score = z_score(report.estimate.mean, report.estimate.std_error, report.prediction);
  report.surrogate = surrogate.name();
  report.surrogate_error = surrogate.error_estimate();
  return report;
}

/// h_1(x) = (j-1)! [phi(xbar + Z_X) - phi(Z_X)].
inline double h1(const ValuationSpec& spec, const Vector& x, const ZonoidSurrogate& zx,
                 const ExecutionOptions& options = {}) {
  return to_double(factorial(spec.j() - 1)) * zx.increment(spec, x, options);
}

/// theta = j! phi(Z_X).
inline double theta(const ValuationSpec& spec, const ZonoidSurrogate& zx, const ExecutionOptions& options = {}) {
  return to_double(factorial(spec.j())) * zx.valuation(spec, options);
}

struct Zeta1Estimate {
  EstimateResult zeta1;          // mean of (h_1(X) - theta)^2
  EstimateResult centered_mean;  // mean of h_1(X) - theta, should vanish
  double theta = 0.0;
};

/// Monte Carlo zeta_1 = E (h_1(X) - theta)^2. Blocks of 4096 draws use their
/// own sub-streams of `seed`.
inline Zeta1Estimate zeta1_mc(const DistributionSpec& spec, const ValuationSpec& valuation_spec,
                              const ZonoidSurrogate& zx, std::uint64_t reps, const SeedSpec& seed,
                              const ExecutionOptions& options = {}) {
  spec.validate();
  valuation_spec.validate(spec.d());
  detail::require(reps >= 2, "zeta1_mc: need reps >= 2");
  Zeta1Estimate out;
  out.theta = theta(valuation_spec, zx, options);
  ExecutionOptions inner = options;
  inner.threads = 1;
  std::vector<double> centered(reps);
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (reps + kBlock - 1) / kBlock;
  parallel_for(blocks, options.threads, [&](std::size_t b) {
    Sampler sampler(spec, seed.substream(b));
    for (std::uint64_t r = b * kBlock; r < std::min(reps, (b + 1) * kBlock); ++r)
      centered[r] = h1(valuation_spec, sampler.next(), zx, inner) - out.theta;
  });
  std::vector<double> squares(reps);
  for (std::size_t i = 0; i < reps; ++i) squares[i] = centered[i] * centered[i];
  out.zeta1 = summarize(squares, seed);
  out.centered_mean = summarize(centered, seed);
  return out;
}

/// zeta_1 = sum_i p_i (h_1(x_i) - theta)^2 for a discrete law with its exact
/// zonoid.
inline double zeta1_exact_discrete(const DistributionSpec& spec, const ValuationSpec& valuation_spec,
                                   const ExecutionOptions& options = {}) {
  const auto zx = ZonoidSurrogate::exact(zonoid_exact_discrete(spec));
  const double th = theta(valuation_spec, zx, options);
  KahanSum<double> acc;
  for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
    if (spec.probs[i] == 0.0) continue;
    const double c = h1(valuation_spec, spec.atoms[i], zx, options) - th;
    acc.add(spec.probs[i] * c * c);
  }
  return acc.value();
}

struct GaussianZeta1 {
  double a = 0.0;
  double b = 0.0;
  double zeta1 = 0.0;
};

/// Closed form for X standard Gaussian and phi = V_j: h~_1(x) = a(|x| - b),
///   a = ((d-1)!/(d-j)!) (kappa_{d-1}/kappa_{d-j}) R^{j-1},  b = (d kappa_d / kappa_{d-1}) R,
///   zeta_1 = a^2 (E|X|^2 - 2 b E|X| + b^2).
inline GaussianZeta1 zeta1_gaussian_closed_form(int d, int j, double radius = kGaussianZonoidRadius) {
  detail::require(d >= 1 && j >= 1 && j <= d, "zeta1_gaussian_closed_form: need 1 <= j <= d");
  const auto kappa = unit_ball_volumes(d);
  const auto du = static_cast<std::size_t>(d);
  const auto ju = static_cast<std::size_t>(j);
  GaussianZeta1 out;
  out.a = to_double(falling_factorial(du - 1, ju - 1)) * kappa[du - 1] / kappa[du - ju] * std::pow(radius, j - 1);
  out.b = static_cast<double>(d) * kappa[du] / kappa[du - 1] * radius;
  const auto moments = gaussian_norm_moments(d);
  out.zeta1 = out.a * out.a * (moments.second_moment - 2.0 * out.b * moments.mean + out.b * out.b);
  return out;
}

struct Lemma41Diagnosis {
  bool pass = false;
  bool origin_in_support = false;
  std::size_t support_rank = 0;
  std::vector<std::string> reasons;
};

/// Checks the two support conditions that make zeta_1 > 0: the origin lies
/// in the support of X and the support is not inside a (j-1)-dimensional
/// subspace.
inline Lemma41Diagnosis lemma41_precheck(const DistributionSpec& spec, int j) {
  spec.validate();
  Lemma41Diagnosis out;
  switch (spec.kind) {
    case DistributionKind::gaussian_std:
    case DistributionKind::uniform_cube:
      out.origin_in_support = true;
      out.support_rank = spec.d();
      break;
    case DistributionKind::uniform_sphere:
      out.origin_in_support = false;
      out.support_rank = spec.d();
      break;
    case DistributionKind::discrete: {
      std::vector<Vector> support;
      for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
        if (spec.probs[i] <= 0.0) continue;
        if (norm(spec.atoms[i]) == 0.0) out.origin_in_support = true;
        support.push_back(spec.atoms[i]);
      }
      out.support_rank = numerical_rank(support);
      break;
    }
  }
  if (!out.origin_in_support) out.reasons.push_back("origin: the support of X does not contain the origin");
  if (j < 1 || out.support_rank < static_cast<std::size_t>(j))
    out.reasons.push_back("rank: the support spans a subspace of dimension " + std::to_string(out.support_rank) +
                          " < j = " + std::to_string(j));
  out.pass = out.reasons.empty();
  return out;
}

}  // namespace rzono
