#pragma once

#include <array>
#include <cstdint>

namespace spca {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used for seeding and for
/// deriving per-trial substreams.
std::uint64_t splitmix64(std::uint64_t& state);

/// Stateless mix of one 64-bit word through the SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of trial `index` in a run with seed `base_seed`:
/// mix64(base_seed + 0x9E3779B97F4A7C15 * (index + 1)).
/// Depends only on (base_seed, index), never on execution order.
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t index);

/// xoshiro256** 1.0 (Blackman & Vigna) seeded by four SplitMix64 outputs.
///
/// Uniform doubles use the top 53 bits. Gaussian variates use the Marsaglia
/// polar method; the second variate of each accepted pair is cached and
/// returned by the next call. The algorithm and the consumption order are
/// frozen: identical seeds give identical streams on every platform.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, bound), by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal variate (Marsaglia polar method).
  double gaussian();

  /// +1 or -1 with equal probability.
  double sign() { return (next_u64() >> 63) != 0 ? -1.0 : 1.0; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace spca
