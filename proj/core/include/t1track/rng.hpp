#pragma once

#include <cstdint>
#include <limits>

namespace t1track {

/// Counter-based 64-bit generator ("splitmix64-ctr").
///
/// Output i of a stream with key K is mix64(K + (i + 1) * 0x9E3779B97F4A7C15), where mix64 is the
/// SplitMix64 finalizer. Streams are derived from a user seed and a stream index by
/// K = mix64(seed ^ mix64(index + 0x632BE59BD9B4E019)), so repetition r of a run can be
/// regenerated in isolation. Distribution transforms are implemented here rather than taken
/// from <random>, so the same seed yields the same samples on every standard library.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key = 0) noexcept : key_(key) {}

  static CounterRng stream(std::uint64_t seed, std::uint64_t index) noexcept;
  /// Child stream of this generator's key (does not advance the parent).
  CounterRng substream(std::uint64_t index) const noexcept { return stream(key_, index); }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1].
  double uniform_positive() noexcept { return 1.0 - uniform(); }
  bool bernoulli(double p) noexcept { return uniform() < p; }
  /// Exponential holding time with the given rate (1/s). rate <= 0 returns +inf.
  double exponential(double rate) noexcept;
  /// Standard normal via Box-Muller (consumes two uniforms per call).
  double normal() noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace t1track
