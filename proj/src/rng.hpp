#pragma once

#include <cstdint>

namespace boundopt {

// SplitMix64 mixing step (Steele et al.), used as a stateless hash.
inline uint64_t splitmix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based generator: every draw is a pure function of (seed, t, lane).
// No mutable state, so streams can be replayed from any step, split across
// threads, or re-derived after a checkpoint without bookkeeping.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : seed_(seed) {}

  uint64_t word(uint64_t t, uint64_t lane = 0) const {
    uint64_t h = splitmix64(seed_ ^ splitmix64(t ^ 0xD1B54A32D192ED03ull));
    return splitmix64(h ^ splitmix64(lane ^ 0xA5A5A5A5A5A5A5A5ull));
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01(uint64_t t, uint64_t lane = 0) const {
    return static_cast<double>(word(t, lane) >> 11) * 0x1.0p-53;
  }

  double uniform(uint64_t t, uint64_t lane, double lo, double hi) const {
    return lo + (hi - lo) * uniform01(t, lane);
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
};

// Per-point seed for sweep grids: documented fixed hash of (base, index).
inline uint64_t derive_seed(uint64_t base, uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 1));
}

}  // namespace boundopt
