#pragma once

#include <cstdint>
#include <random>

namespace msgate {

// splitmix64 finalizer; used to decorrelate seeds before feeding mt19937_64 and
// to derive per-trajectory streams from a master seed by a splittable counter.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Stream i of a master seed: the splitmix64 output sequence starting at master.
inline std::uint64_t seed_stream(std::uint64_t master, std::uint64_t i) {
  return splitmix64(master + i * 0x9E3779B97F4A7C15ULL);
}

// Uniform in [0,1) from the top 53 bits; bit-identical across platforms,
// unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace msgate
