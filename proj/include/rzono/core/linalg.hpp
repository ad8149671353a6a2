#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rzono/core/vector.hpp"

namespace rzono {

/// Scratch space reused across the many small factorizations of a subset sum.
struct LinalgWorkspace {
  std::vector<double> matrix;
  std::vector<std::size_t> perm;
};

/// j-volume of the parallelepiped spanned by `columns` (each of length d):
/// the product of |R_kk| from a Householder QR of the d x j matrix. Unlike
/// sqrt(det(G^T G)) this does not square the conditioning, so nearly
/// dependent columns give a volume of order eps rather than sqrt(eps).
inline double span_volume(std::span<const double* const> columns, std::size_t d, LinalgWorkspace& ws) {
  const std::size_t j = columns.size();
  if (j == 0) return 1.0;
  if (j > d) return 0.0;
  ws.matrix.resize(d * j);
  double* a = ws.matrix.data();  // column-major: a[c*d + r]
  for (std::size_t c = 0; c < j; ++c) std::copy(columns[c], columns[c] + d, a + c * d);
  double volume = 1.0;
  for (std::size_t k = 0; k < j; ++k) {
    double* col = a + k * d;
    double n2 = 0.0;
    for (std::size_t r = k; r < d; ++r) n2 += col[r] * col[r];
    if (n2 == 0.0) return 0.0;
    const double alpha = col[k] >= 0.0 ? -std::sqrt(n2) : std::sqrt(n2);
    volume *= std::abs(alpha);
    // v = x - alpha e_k stored in place; |v|^2 = 2(n2 - alpha x_k)
    col[k] -= alpha;
    const double vnorm2 = 2.0 * (n2 - alpha * (col[k] + alpha));
    for (std::size_t c = k + 1; c < j; ++c) {
      double* other = a + c * d;
      double s = 0.0;
      for (std::size_t r = k; r < d; ++r) s += col[r] * other[r];
      const double f = 2.0 * s / vnorm2;
      for (std::size_t r = k; r < d; ++r) other[r] -= f * col[r];
    }
  }
  return volume;
}

/// |det| of the square matrix whose columns are `columns` (each of length d,
/// d == columns.size()), by Gaussian elimination with partial pivoting.
inline double abs_determinant(std::span<const double* const> columns, std::size_t d,
                              LinalgWorkspace& ws) {
  if (d == 0) return 1.0;
  ws.matrix.resize(d * d);
  double* m = ws.matrix.data();
  // row-major copy: m[r*d + c] = columns[c][r]
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t r = 0; r < d; ++r) m[r * d + c] = columns[c][r];
  double det = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t best = k;
    for (std::size_t r = k + 1; r < d; ++r)
      if (std::abs(m[r * d + k]) > std::abs(m[best * d + k])) best = r;
    const double pivot = m[best * d + k];
    if (pivot == 0.0) return 0.0;
    if (best != k)
      for (std::size_t c = k; c < d; ++c) std::swap(m[k * d + c], m[best * d + c]);
    det *= pivot;
    for (std::size_t r = k + 1; r < d; ++r) {
      const double factor = m[r * d + k] / pivot;
      if (factor == 0.0) continue;
      for (std::size_t c = k + 1; c < d; ++c) m[r * d + c] -= factor * m[k * d + c];
    }
  }
  return std::abs(det);
}

/// Numerical rank of a set of vectors (relative tolerance on pivoted Gram
/// pivots).
inline std::size_t numerical_rank(std::span<const Vector> vectors, double rel_tol = 1e-10) {
  if (vectors.empty()) return 0;
  const std::size_t d = vectors.front().dim();
  // Modified Gram-Schmidt with the largest remaining residual as pivot.
  std::vector<std::vector<double>> rest;
  double scale = 0.0;
  for (const auto& v : vectors) {
    rest.emplace_back(v.begin(), v.end());
    scale = std::max(scale, dot(v, v));
  }
  if (scale == 0.0) return 0;
  std::size_t rank = 0;
  while (rank < d && !rest.empty()) {
    auto it = std::max_element(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
      return dot(a, a) < dot(b, b);
    });
    const double n2 = dot(*it, *it);
    if (n2 <= rel_tol * rel_tol * scale) break;
    std::vector<double> q = *it;
    for (double& c : q) c /= std::sqrt(n2);
    rest.erase(it);
    for (auto& r : rest) {
      const double proj = dot(r, q);
      for (std::size_t i = 0; i < d; ++i) r[i] -= proj * q[i];
    }
    ++rank;
  }
  return rank;
}

}  // namespace rzono
