#ifndef JSAT_RNG_HPP
#define JSAT_RNG_HPP

#include <cstdint>

namespace jsat {

// splitmix64 finalizer (Steele, Lea & Flood 2014); fixed here so that seeded
// streams are identical on every platform and release.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based generator: the state for stream b is derived from (seed, b)
// alone, so streams can be consumed out of order and in parallel.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static Rng from_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  // unbiased integer in [0, n) via rejection sampling
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = -n % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // uniform in [0, 1) with 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace jsat

#endif
