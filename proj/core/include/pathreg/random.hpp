#pragma once

#include <cstdint>
#include <string_view>

namespace pathreg {

/// Recorded in every output manifest; bump when the generator or any
/// derived sampling routine changes its output.
inline constexpr std::string_view kPrngVersion = "splitmix64-counter-v1";

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent seed from (seed, index).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL));
}

/// Counter-based generator: output n of stream s under seed k is a pure
/// function of (k, s, n), so streams can be handed to workers in any order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(derive_seed(seed, stream)) {}

  std::uint64_t next() { return splitmix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., bound - 1}; bound > 0. Lemire's multiply-shift with rejection.
  std::uint64_t uniform_int(std::uint64_t bound);

  /// Standard exponential, -log(1 - U).
  double exponential();

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace pathreg
