#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

namespace rzono {

/// Philox4x32-10 counter-based bijection (Salmon et al., Random123).
class Philox4x32 {
public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) {
    ctr = round(ctr, key);
    for (int r = 1; r < 10; ++r) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
      ctr = round(ctr, key);
    }
    return ctr;
  }

private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static Counter round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
  }
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Identifies one reproducible random stream.
///
/// Stream layout: the Philox key is the 64-bit master seed; the 128-bit
/// counter is (block index : stream_id), so streams with different ids never
/// share a counter value. Sub-streams (one per Monte Carlo replication, chunk
/// or role) are derived as stream_id' = splitmix64(splitmix64(stream_id) ^ index);
/// splitmix64 is a bijection, so distinct indices under one parent always give
/// distinct children.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  [[nodiscard]] SeedSpec substream(std::uint64_t index) const {
    return {master_seed, splitmix64(splitmix64(stream_id) ^ index)};
  }

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Sub-stream indices reserved for distinct roles inside one experiment.
namespace stream_role {
inline constexpr std::uint64_t replications = 1;
inline constexpr std::uint64_t surrogate = 2;
inline constexpr std::uint64_t zeta = 3;
inline constexpr std::uint64_t radius_oracle = 4;
inline constexpr std::uint64_t directions = 5;
inline constexpr std::uint64_t subsample = 6;
}  // namespace stream_role

/// Sequential reader over one Philox stream.
///
/// Uniforms use 53 bits from two consecutive 32-bit words and lie in the open
/// interval (0, 1). Normals use the Marsaglia polar method, caching the second
/// variate of each accepted pair.
class RandomStream {
public:
  explicit RandomStream(const SeedSpec& seed)
      : key_{static_cast<std::uint32_t>(seed.master_seed), static_cast<std::uint32_t>(seed.master_seed >> 32)},
        stream_(seed.stream_id) {}

  std::uint32_t next_u32() {
    if (position_ == 4) refill();
    return buffer_[position_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
  }

  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound), bound > 0, by rejection (unbiased).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= limit) return r % bound;
    }
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

private:
  void refill() {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                  static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    buffer_ = Philox4x32::generate(ctr, key_);
    ++block_;
    position_ = 0;
  }

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int position_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rzono
