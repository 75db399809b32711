#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ensc {

// Deterministic seed derivation. Every parallel unit of work (block, trial,
// restart) derives its own generator from (master seed, tags...), so results
// do not depend on thread scheduling or worker count.
//
// splitmix64 is the standard 64-bit finalizer-based mixer; good enough for
// decorrelating seeds, not meant for cryptography.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag1,
                                 std::uint64_t tag2) {
  return derive_seed(derive_seed(seed, tag1), tag2);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag1,
                                 std::uint64_t tag2, std::uint64_t tag3) {
  return derive_seed(derive_seed(seed, tag1, tag2), tag3);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed));
}

// The std distributions are implementation-defined, which would make outputs
// differ across standard libraries. These two are pinned instead.
inline double uniform01(std::mt19937_64& g) {
  return double(g() >> 11) * 0x1.0p-53;
}

// Box-Muller. Draws two uniforms per call; wasteful but branch-free and
// reproducible.
inline double normal01(std::mt19937_64& g) {
  double u1 = uniform01(g);
  double u2 = uniform01(g);
  if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace ensc
