#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace superres {

/// Counter-based random stream.
///
/// Every draw is a pure function of (key, counter): `bits(i)` is the SplitMix64
/// finaliser applied to the key-mixed counter. Streams for distinct purposes
/// are derived with `substream(tag)`, so a trial that uses the same seed always
/// sees the same numbers regardless of thread scheduling or draw order
/// elsewhere. The generated values are identical on every platform, unlike
/// the standard library distributions.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(mix(key ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

  /// Random bits at an explicit counter position; does not advance.
  constexpr std::uint64_t bits(std::uint64_t index) const noexcept {
    return mix(key_ + mix(index));
  }

  constexpr std::uint64_t next_u64() noexcept { return bits(counter_++); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Log-uniform in [lo, hi]; both bounds positive.
  double log_uniform(double lo, double hi) noexcept {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  /// Independent stream for a named purpose.
  constexpr CounterRng substream(std::uint64_t tag) const noexcept {
    return CounterRng(key_ ^ mix(tag + 0x3c6ef372fe94f82bULL), Raw{});
  }

 private:
  struct Raw {};
  constexpr CounterRng(std::uint64_t key, Raw) noexcept : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Tags for substreams used across modules.
namespace stream_tag {
inline constexpr std::uint64_t kAmplitudes = 1;
inline constexpr std::uint64_t kNoise = 2;
inline constexpr std::uint64_t kEpsilon = 3;
inline constexpr std::uint64_t kJitter = 4;
}  // namespace stream_tag

}  // namespace superres
