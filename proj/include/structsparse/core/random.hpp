#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "structsparse/core/signal.hpp"

namespace structsparse {

/// The one generator type used across the library. Every stochastic routine
/// takes either a seed or a reference to one of these.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

inline Signal gaussian_vector(Index n, Rng& rng, double stddev = 1.0) {
  std::normal_distribution<double> dist(0.0, stddev);
  Signal v(n);
  for (Index i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Index uniform_index(Rng& rng, Index lo, Index hi_inclusive) {
  return std::uniform_int_distribution<Index>(lo, hi_inclusive)(rng);
}

/// k distinct indices from [0, n), in draw order.
inline std::vector<Index> sample_without_replacement(Index n, Index k, Rng& rng) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    Index j = uniform_index(rng, i, n - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

}  // namespace structsparse
