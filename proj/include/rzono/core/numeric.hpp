#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>

#include "rzono/core/error.hpp"

namespace rzono {

__extension__ using u128 = unsigned __int128;

/// Compensated accumulator (Neumaier's variant of Kahan summation).
template <typename T = double>
class KahanSum {
public:
  void add(T value) {
    const T t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value))
      compensation_ += (sum_ - t) + value;
    else
      compensation_ += (value - t) + sum_;
    sum_ = t;
  }
  KahanSum& operator+=(T value) {
    add(value);
    return *this;
  }
  [[nodiscard]] T value() const { return sum_ + compensation_; }

private:
  T sum_{0};
  T compensation_{0};
};

/// Ordered compensated sum of a span; the result depends only on the order of
/// the elements.
template <typename T>
T ordered_sum(std::span<const T> values) {
  KahanSum<T> acc;
  for (const T& v : values) acc.add(v);
  return acc.value();
}

/// Exact binomial coefficient C(n, k) in 128-bit arithmetic. Throws on overflow.
inline u128 binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  u128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result == C(n - k + i - 1, i - 1) here, so the division below is exact.
    u128 product;
    if (__builtin_mul_overflow(result, static_cast<u128>(n - k + i), &product))
      throw DomainError("binomial coefficient C(" + std::to_string(n) + ", " +
                        std::to_string(k) + ") overflows 128 bits");
    result = product / i;
  }
  return result;
}

/// Falling factorial n (n-1) ... (n-k+1), exact, throws on overflow.
inline u128 falling_factorial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  u128 result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (__builtin_mul_overflow(result, static_cast<u128>(n - i), &result))
      throw DomainError("falling factorial overflows 128 bits");
  }
  return result;
}

inline u128 factorial(std::uint64_t k) { return falling_factorial(k, k); }

inline double to_double(u128 value) { return static_cast<double>(value); }

inline std::string to_string(u128 value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  return digits;
}

}  // namespace rzono
