#pragma once

#include <cstdint>

namespace xyq {

// Counter-based generator: value = hash(seed, stream, counter). Stateless,
// so draws are reproducible regardless of evaluation order or thread count.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct CounterRng {
  std::uint64_t key;

  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key(splitmix64(splitmix64(seed) ^ (stream * 0xda942042e4dd58b5ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return splitmix64(key ^ (counter * 0x9e3779b97f4a7c15ULL) ^ (counter >> 7));
  }

  // uniform in (0, 1]
  double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 1.0) * 0x1.0p-53;
  }

  // standard normal via Box-Muller, one draw per counter
  double gaussian(std::uint64_t counter) const;
};

}  // namespace xyq
