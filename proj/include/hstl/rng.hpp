#pragma once

// Seeded, splittable randomness. One run seed fans out into independent
// labeled substreams (environment, exploration, resets, ...) so that adding
// draws to one component never perturbs another. Draw helpers avoid
// std::uniform_*_distribution on purpose: their output is implementation
// defined, and runs must replay bit-identically everywhere.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace hstl {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Independent generator for (seed, label). Identical inputs give identical
// streams on every platform.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::string_view label) {
  std::uint64_t state = seed ^ fnv1a(label);
  std::uint64_t a = splitmix64(state);
  std::uint64_t b = splitmix64(state);
  std::seed_seq seq{static_cast<unsigned>(a), static_cast<unsigned>(a >> 32),
                    static_cast<unsigned>(b), static_cast<unsigned>(b >> 32)};
  return std::mt19937_64(seq);
}

// Unbiased draw from [0, n) by rejection.
inline std::uint64_t uniform_index(std::mt19937_64& g, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index over empty range");
  std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t x = g();
    if (x >= threshold) return x % n;
  }
}

// Draw from [0, 1) with 53 bits of precision.
inline double uniform_real01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace hstl
