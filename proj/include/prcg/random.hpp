#pragma once

#include <cstdint>

namespace prcg {

/// Counter-based generator: the i-th output is a fixed bijective mix of
/// (key, i), so a stream is fully determined by its key and position and
/// is identical on every platform. split() derives independent child
/// streams.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ kSeedSalt)) {}

  std::uint64_t next() { return mix(key_ + kGolden * ++counter_); }

  /// Uniform on (0, 1], 53-bit resolution.
  double uniform_open_low() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  CounterRng split(std::uint64_t stream) const {
    return CounterRng(key_ ^ mix(stream + kStreamSalt), Raw{});
  }

  std::uint64_t position() const noexcept { return counter_; }

 private:
  struct Raw {};
  CounterRng(std::uint64_t key, Raw) : key_(key) {}

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSeedSalt = 0x243f6a8885a308d3ULL;
  static constexpr std::uint64_t kStreamSalt = 0x13198a2e03707344ULL;

  // SplitMix64 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace prcg
