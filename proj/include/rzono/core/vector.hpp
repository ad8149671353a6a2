#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "rzono/core/error.hpp"

namespace rzono {

/// A point of R^d with finite coordinates. The segment from the origin to the
/// point is implied wherever a Vector acts as a zonotope generator.
class Vector {
public:
  Vector() = default;
  explicit Vector(std::size_t dim) : coords_(dim, 0.0) {}
  Vector(std::initializer_list<double> coords) : coords_(coords) { check_finite(); }
  explicit Vector(std::vector<double> coords) : coords_(std::move(coords)) { check_finite(); }

  [[nodiscard]] std::size_t dim() const { return coords_.size(); }
  double& operator[](std::size_t i) { return coords_[i]; }
  double operator[](std::size_t i) const { return coords_[i]; }
  [[nodiscard]] std::span<const double> coords() const { return coords_; }
  [[nodiscard]] const double* data() const { return coords_.data(); }
  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  friend bool operator==(const Vector&, const Vector&) = default;

  static Vector unit(std::size_t dim, std::size_t axis) {
    Vector e(dim);
    e[axis] = 1.0;
    return e;
  }

private:
  void check_finite() const {
    for (double c : coords_)
      if (!std::isfinite(c)) throw DomainError("vector has a non-finite coordinate");
  }

  std::vector<double> coords_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double dot(const Vector& a, const Vector& b) { return dot(a.coords(), b.coords()); }

inline double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

inline Vector operator*(double s, const Vector& a) {
  Vector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = s * a[i];
  return out;
}

inline Vector operator+(const Vector& a, const Vector& b) {
  Vector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline Vector operator-(const Vector& a) { return -1.0 * a; }

namespace detail {

inline void require_dim(const Vector& v, std::size_t dim, const char* what) {
  if (v.dim() != dim)
    throw DomainError(std::string(what) + ": dimension " + std::to_string(v.dim()) +
                      " does not match " + std::to_string(dim));
}

}  // namespace detail
}  // namespace rzono
