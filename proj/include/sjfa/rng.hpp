#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace sjfa {

/// SplitMix64: output k of stream `seed` is mix(seed + (k+1) * 0x9e3779b97f4a7c15).
/// Counter based, so a trace is reproducible from (seed, draw index) alone.
/// Doubles take the top 53 bits, which keeps uniform draws identical across
/// standard libraries (std:: distributions are not).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  static constexpr const char* kName = "splitmix64";

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Exponential with the given rate.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Independent stream for (seed, a, b), e.g. (seed, N, replication).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return mix(mix(seed ^ mix(a + 0x632be59bd9b4e019ULL)) + b);
  }

 private:
  std::uint64_t state_;
};

}  // namespace sjfa
