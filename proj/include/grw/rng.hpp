#pragma once

// Counter-based random stream. Output i of stream (seed, key) is
// splitmix64(seed ^ mix(key) + i * golden); any value can be recomputed
// from its coordinates, which keeps realizations reproducible when work
// is split across threads.

#include <cstdint>
#include <limits>

namespace grw {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed = 0, std::uint64_t key = 0)
      : base_(splitmix64(seed) ^ splitmix64(key + 0x632BE59BD9B4E019ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return splitmix64(base_ + 0x9E3779B97F4A7C15ULL * counter_++); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_{0};
};

}  // namespace grw
