// SPDX-License-Identifier: Apache-2.0
#ifndef FIBERGAN_RNG_HPP
#define FIBERGAN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fibergan {

// SplitMix64 (Steele/Lea/Flood reference sequence). Chosen over the std
// distributions because its output is pinned bit-for-bit by the algorithm,
// so every dataset, model and noise draw is reproducible from its seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Decorrelated child seed for stream `stream_id`, item `index`, derived from
// a master seed. One extra SplitMix64 mixing round keeps nearby (stream,
// index) pairs statistically independent.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id,
                                 std::uint64_t index = 0) {
  SplitMix64 mix(master ^ (stream_id * 0xD6E8FEB86659FD93ull) ^
                 (index * 0xA5A5A5A5A5A5A5A5ull));
  return mix.next_u64();
}

// Stream ids, one per independent consumer of randomness.
namespace seed_stream {
inline constexpr std::uint64_t kBits = 1;
inline constexpr std::uint64_t kChannelNoise = 2;
inline constexpr std::uint64_t kGeneratorInit = 3;
inline constexpr std::uint64_t kDiscriminatorInit = 4;
inline constexpr std::uint64_t kShuffle = 5;
inline constexpr std::uint64_t kTrainingNoise = 6;
inline constexpr std::uint64_t kLabels = 7;
inline constexpr std::uint64_t kInferenceNoise = 8;
}  // namespace seed_stream

}  // namespace fibergan

#endif
