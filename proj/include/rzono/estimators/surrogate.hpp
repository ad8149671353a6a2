#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rzono/core/ball.hpp"
#include "rzono/core/error.hpp"
#include "rzono/core/numeric.hpp"
#include "rzono/core/parallel.hpp"
#include "rzono/core/zonotope.hpp"
#include "rzono/dist/distribution.hpp"

namespace rzono {

enum class SurrogateSource { exact_discrete, gaussian_closed_form, empirical };

inline std::string to_string(SurrogateSource source) {
  switch (source) {
    case SurrogateSource::exact_discrete: return "exact_discrete";
    case SurrogateSource::gaussian_closed_form: return "gaussian_closed_form";
    case SurrogateSource::empirical: return "empirical";
  }
  return "unknown";
}

/// Stand-in for the zonoid Z_X used wherever phi(Z_X), phi(xbar + Z_X) or
/// h(Z_X, .) is needed. Preference order: exact discrete zonotope, then the
/// Gaussian ball R B^d, then the empirical zonotope Z_n of a large sample.
class ZonoidSurrogate {
public:
  static ZonoidSurrogate exact(Zonotope z) {
    ZonoidSurrogate s(SurrogateSource::exact_discrete, z.dim());
    s.zonotope_ = std::move(z);
    return s;
  }

  static ZonoidSurrogate gaussian_ball(int d, double radius = kGaussianZonoidRadius) {
    ZonoidSurrogate s(SurrogateSource::gaussian_closed_form, static_cast<std::size_t>(d));
    s.radius_ = radius;
    return s;
  }

  static ZonoidSurrogate empirical(Zonotope z, double error_estimate) {
    ZonoidSurrogate s(SurrogateSource::empirical, z.dim());
    s.zonotope_ = std::move(z);
    s.error_estimate_ = error_estimate;
    return s;
  }

  [[nodiscard]] SurrogateSource source() const { return source_; }
  [[nodiscard]] std::string name() const { return to_string(source_); }
  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] double radius() const { return radius_; }
  [[nodiscard]] const std::optional<Zonotope>& zonotope() const { return zonotope_; }
  /// Zero for exact sources; for the empirical one, |phi(Z_n) - phi(Z_{n/2})|
  /// of the valuation it was built for (set by make_surrogate).
  [[nodiscard]] double error_estimate() const { return error_estimate_; }

  /// phi(Z_X).
  [[nodiscard]] double valuation(const ValuationSpec& spec, const ExecutionOptions& options = {}) const {
    spec.validate(dim_);
    if (zonotope_) return rzono::valuation(*zonotope_, spec, options);
    const int d = static_cast<int>(dim_);
    const int j = spec.degree;
    if (spec.kind == ValuationKind::intrinsic) return ball_intrinsic_volume(d, j, radius_);
    // V(R B[j], ybar...) = (j!/d!) kappa_j R^j vol_{d-j}(y...).
    return mixed_coefficient(spec) * unit_ball_volume(j) * std::pow(radius_, j) *
           fixed_volume(spec.fixed_segments);
  }

  /// phi(xbar + Z_X) - phi(Z_X).
  [[nodiscard]] double increment(const ValuationSpec& spec, const Vector& x, const ExecutionOptions& options = {}) const {
    spec.validate(dim_);
    detail::require_dim(x, dim_, "surrogate increment");
    if (zonotope_) return segment_increment(*zonotope_, spec, x, options);
    const int d = static_cast<int>(dim_);
    const int j = spec.degree;
    if (spec.kind == ValuationKind::intrinsic)
      return segment_plus_ball_intrinsic(x, radius_, j) - ball_intrinsic_volume(d, j, radius_);
    // Projecting onto the complement of the fixed segments turns xbar + R B^d
    // into a segment plus a j-ball, whose volume grows by kappa_{j-1} R^{j-1} |Px|;
    // |Px| vol(y...) = vol(x, y...).
    std::vector<Vector> with_x{x};
    with_x.insert(with_x.end(), spec.fixed_segments.begin(), spec.fixed_segments.end());
    return mixed_coefficient(spec) * unit_ball_volume(j - 1) * std::pow(radius_, j - 1) *
           parallelepiped_volume(with_x);
  }

  /// h(Z_X, u).
  [[nodiscard]] double support(const Vector& u) const {
    detail::require_dim(u, dim_, "surrogate support");
    if (zonotope_) return support_function(*zonotope_, u);
    return radius_ * norm(u);
  }

private:
  ZonoidSurrogate(SurrogateSource source, std::size_t dim) : source_(source), dim_(dim) {}

  double mixed_coefficient(const ValuationSpec& spec) const {
    return to_double(factorial(spec.j())) / to_double(factorial(dim_));
  }

  static double fixed_volume(const std::vector<Vector>& fixed) {
    return fixed.empty() ? 1.0 : parallelepiped_volume(fixed);
  }

  SurrogateSource source_;
  std::size_t dim_;
  std::optional<Zonotope> zonotope_;
  double radius_ = 0.0;
  double error_estimate_ = 0.0;
};

/// Best available surrogate for `spec`. The empirical fallback draws
/// `empirical_n` points from `seed`; its error estimate compares phi on the
/// full sample with phi on the first half.
inline ZonoidSurrogate make_surrogate(const DistributionSpec& spec, const ValuationSpec& valuation_spec,
                                      std::size_t empirical_n, const SeedSpec& seed,
                                      const ExecutionOptions& options = {}) {
  spec.validate();
  valuation_spec.validate(spec.d());
  switch (spec.kind) {
    case DistributionKind::discrete: return ZonoidSurrogate::exact(zonoid_exact_discrete(spec));
    case DistributionKind::gaussian_std: return ZonoidSurrogate::gaussian_ball(spec.dim);
    default: break;
  }
  detail::require(empirical_n >= 2, "empirical surrogate needs at least two points");
  auto points = sample(spec, empirical_n, seed);
  const std::size_t half = empirical_n / 2;
  Zonotope full(spec.d(), points, 1.0 / static_cast<double>(empirical_n));
  Zonotope first_half(spec.d(), std::vector<Vector>(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(half)),
                      1.0 / static_cast<double>(half));
  const double error = std::abs(rzono::valuation(full, valuation_spec, options) -
                                rzono::valuation(first_half, valuation_spec, options));
  return ZonoidSurrogate::empirical(std::move(full), error);
}

}  // namespace rzono
