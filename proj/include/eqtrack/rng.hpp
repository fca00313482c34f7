#pragma once

#include <cstdint>
#include <limits>

namespace eqtrack {

/// Counter-based generator: the output stream is a pure function of the key
/// (seed, stream_a, stream_b), so Monte Carlo replications and time steps can
/// be replayed independently of scheduling order.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream_a = 0, std::uint64_t stream_b = 0)
      : counter_(mix(mix(mix(seed) ^ (stream_a + kGolden)) ^ (stream_b + 2 * kGolden))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    counter_ += kGolden;
    return mix(counter_);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t counter_;
};

}  // namespace eqtrack
