#pragma once

#include <cmath>
#include <cstdint>

namespace bosecool {

// xoshiro256** seeded through splitmix64. Distribution helpers are spelled
// out here instead of using <random> adaptors so that streams are identical
// across standard libraries; trajectories must be reproducible bit-for-bit
// from (seed, config) alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : s_) word = splitmix64(x);
  }

  // Decorrelated stream k of a master seed (one stream per trajectory or
  // per pipeline stage).
  static Rng stream(std::uint64_t seed, std::uint64_t k) {
    return Rng(stream_seed(seed, k));
  }

  // The effective single-seed equivalent of stream(seed, k); recorded in
  // trajectory output so any run can be reconstructed without the stream id.
  static std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t k) {
    return seed + k * 0x9E3779B97F4A7C15ull;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0,1]; safe as a log argument.
  double uniform_pos() { return 1.0 - uniform(); }

  // Exponential waiting time with the given total rate.
  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace bosecool
