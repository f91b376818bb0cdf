#pragma once

#include <cstdint>

namespace carleson {

// SplitMix64 finalizer. All randomness in the library is derived from
// (seed, counter) pairs through this mixer, so results do not depend on
// evaluation order and are identical across platforms.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Uniform double in [0,1) keyed by (seed, index).
inline double uniform01(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t h = mix64(mix64(seed) ^ (index + 0x632be59bd9b4e019ull));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Sequential convenience wrapper over the counter scheme.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(mix64(seed ^ mix64(stream + 0x51ed2701ab582d17ull))) {}

  double uniform() { return uniform01(seed_, counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace carleson
