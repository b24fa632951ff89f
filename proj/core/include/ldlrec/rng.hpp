#ifndef LDLREC_RNG_HPP
#define LDLREC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace ldlrec::rng {

// std::uniform_*_distribution output is implementation defined, so all
// sampling goes through these helpers to keep seeded runs reproducible
// across standard libraries.

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
  // rejection sampling keeps the draw exactly uniform
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = gen();
  while (v >= limit) v = gen();
  return static_cast<std::size_t>(v % n);
}

inline double normal(std::mt19937_64& gen) {
  // Box-Muller, no cached spare: two uniforms per draw
  const double u1 = 1.0 - uniform01(gen);  // (0, 1]
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace ldlrec::rng

#endif
