// Counter-based deterministic random streams (splitmix64 core). Every random
// decision in the library draws from an RngStream, so a run is reproducible
// from a single seed and streams can be replayed independently of each other.
#pragma once

#include <cstdint>
#include <string_view>

namespace subquad {

namespace detail {
inline uint64_t splitmix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}
}  // namespace detail

class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream_id)
      : key_(detail::splitmix64(seed ^ detail::splitmix64(stream_id))) {}

  // Stable sub-stream derivation: same (seed, label, index) always yields the
  // same stream, regardless of how many values were drawn elsewhere.
  static RngStream derive(uint64_t seed, std::string_view label, uint64_t index = 0) {
    return RngStream(seed, detail::fnv1a64(label) + 0x9e3779b97f4a7c15ULL * index);
  }

  uint64_t next_u64() { return detail::splitmix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform in {0, ..., n-1}, unbiased via rejection.
  uint64_t next_below(uint64_t n) {
    if (n <= 1) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t u;
    do {
      u = next_u64();
    } while (u >= limit);
    return u % n;
  }

  uint64_t counter() const { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace subquad
