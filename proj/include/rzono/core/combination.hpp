#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rzono/core/numeric.hpp"

namespace rzono {

/// Advances `indices` (strictly increasing, values in [0, n)) to the next
/// k-combination in lexicographic order. Returns false after the last one.
inline bool next_combination(std::span<std::size_t> indices, std::size_t n) {
  const std::size_t k = indices.size();
  if (k == 0) return false;
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (indices[i] < n - k + i) {
      ++indices[i];
      for (std::size_t m = i + 1; m < k; ++m) indices[m] = indices[m - 1] + 1;
      return true;
    }
  }
  return false;
}

/// The k-combination of {0..n-1} with lexicographic rank `rank`.
inline std::vector<std::size_t> unrank_combination(u128 rank, std::size_t n, std::size_t k) {
  std::vector<std::size_t> out(k);
  std::size_t next = 0;
  for (std::size_t pos = 0; pos < k; ++pos) {
    for (;; ++next) {
      // combinations starting with `next` at this position
      const u128 block = binomial(n - next - 1, k - pos - 1);
      if (rank < block) break;
      rank -= block;
    }
    out[pos] = next++;
  }
  return out;
}

}  // namespace rzono
