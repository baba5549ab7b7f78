// Seed derivation and Gaussian helpers. Every random quantity in the library
// is drawn from a generator seeded by derive_seed(), so results depend only on
// (master seed, tags) and never on execution order.
#pragma once

#include "qpt/core.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qpt {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Mixes a master seed with an ordered list of integer tags.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(master);
  for (auto t : tags) h = splitmix64(h ^ splitmix64(t + 0x632BE59BD9B4E019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

/// Matrix with i.i.d. complex entries whose real and imaginary parts are N(0, 1).
inline Matrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<Real> n01(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Real re = n01(rng);
      const Real im = n01(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

}  // namespace qpt
