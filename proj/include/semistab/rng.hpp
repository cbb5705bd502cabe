#pragma once

#include <cstdint>

namespace semistab {

// splitmix64: tiny and byte-stable across platforms, which keeps generated
// streams identical everywhere for a fixed seed
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [lo, hi] inclusive; the modulo bias is irrelevant for test data
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool chance(int num, int den) { return range(1, den) <= num; }
};

// decorrelates per-instance streams so batch item i can be generated
// independently of the others (and hence in parallel)
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  Rng r(seed ^ (0x6a09e667f3bcc909ull + index * 0x9e3779b97f4a7c15ull));
  r.next();
  return r.next();
}

}  // namespace semistab
