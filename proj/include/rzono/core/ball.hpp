#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "rzono/core/error.hpp"
#include "rzono/core/numeric.hpp"
#include "rzono/core/vector.hpp"

namespace rzono {

/// Volumes kappa_0..kappa_d of the unit balls B^0..B^d.
struct BallGeometry {
  std::size_t dimension = 0;
  std::vector<double> kappa;

  [[nodiscard]] double operator[](std::size_t k) const { return kappa.at(k); }
};

/// kappa_k = kappa_{k-2} * 2 pi / k, seeded with kappa_0 = 1, kappa_1 = 2.
inline BallGeometry unit_ball_volumes(int d) {
  detail::require(d >= 1, "unit_ball_volumes: dimension must be >= 1");
  BallGeometry geometry;
  geometry.dimension = static_cast<std::size_t>(d);
  geometry.kappa.resize(geometry.dimension + 1);
  geometry.kappa[0] = 1.0;
  geometry.kappa[1] = 2.0;
  for (std::size_t k = 2; k <= geometry.dimension; ++k)
    geometry.kappa[k] = geometry.kappa[k - 2] * 2.0 * std::numbers::pi / static_cast<double>(k);
  return geometry;
}

inline double unit_ball_volume(int d) {
  if (d == 0) return 1.0;
  return unit_ball_volumes(d)[static_cast<std::size_t>(d)];
}

/// V_j(R B^d) = C(d,j) (kappa_d / kappa_{d-j}) R^j.
inline double ball_intrinsic_volume(int d, int j, double radius) {
  detail::require(d >= 1, "ball_intrinsic_volume: dimension must be >= 1");
  detail::require(j >= 0 && j <= d, "ball_intrinsic_volume: degree must lie in [0, d]");
  detail::require(radius >= 0.0 && std::isfinite(radius),
                  "ball_intrinsic_volume: radius must be finite and >= 0");
  if (j == 0) return 1.0;
  const auto kappa = unit_ball_volumes(d);
  return to_double(binomial(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(j))) *
         kappa[static_cast<std::size_t>(d)] / kappa[static_cast<std::size_t>(d - j)] *
         std::pow(radius, j);
}

/// V_j(xbar + R B^d) from the Steiner formula for a parallel body of a
/// segment, whose only nonzero intrinsic volumes are V_0 = 1 and V_1 = |x|.
inline double segment_plus_ball_intrinsic(const Vector& x, double radius, int j) {
  const int d = static_cast<int>(x.dim());
  detail::require(d >= 1, "segment_plus_ball_intrinsic: empty vector");
  detail::require(j >= 1 && j <= d, "segment_plus_ball_intrinsic: degree must lie in [1, d]");
  detail::require(radius >= 0.0 && std::isfinite(radius),
                  "segment_plus_ball_intrinsic: radius must be finite and >= 0");
  const auto kappa = unit_ball_volumes(d);
  const auto du = static_cast<std::uint64_t>(d);
  const auto ju = static_cast<std::uint64_t>(j);
  const double k_dj = kappa[static_cast<std::size_t>(d - j)];
  const double ball_term =
      to_double(binomial(du, ju)) * kappa[static_cast<std::size_t>(d)] / k_dj * std::pow(radius, j);
  const double segment_term = to_double(binomial(du - 1, ju - 1)) *
                              kappa[static_cast<std::size_t>(d - 1)] / k_dj * norm(x) *
                              std::pow(radius, j - 1);
  return ball_term + segment_term;
}

}  // namespace rzono
