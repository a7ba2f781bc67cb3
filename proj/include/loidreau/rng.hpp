#ifndef LOIDREAU_RNG_HPP
#define LOIDREAU_RNG_HPP

#include <cstdint>

namespace loidreau {

/// xoshiro256** seeded from a single 64-bit value through splitmix64.
/// Every random draw in the library goes through this generator, so a fixed
/// seed reproduces identical artifacts regardless of platform or standard
/// library version.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& word : s_) word = splitmix64(x);
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, bound); bias-free rejection sampling. bound must be > 0.
  uint64_t below(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  bool coin() { return next() >> 63; }

  /// Derives an independent per-trial seed from a master seed, so parallel
  /// and serial campaigns consume identical randomness.
  static uint64_t derive(uint64_t master, uint64_t index) {
    uint64_t x = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return splitmix64(x);
  }

 private:
  static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t s_[4];
};

}  // namespace loidreau

#endif
