#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/random.hpp"
#include "structsparse/core/signal.hpp"
#include "structsparse/core/tree.hpp"
#include "structsparse/models/dispersive.hpp"

namespace structsparse::harness {

/// k spikes at pairwise distance >= delta, uniformly over admissible
/// placements, amplitudes uniform in [1, 2].
inline Signal spike_train(Index n, Index k, Index delta, Rng& rng) {
  if (k < 1 || delta < 1 || (k - 1) * delta + 1 > n)
    throw InvalidParameter("spike_train: k spikes with the requested gap do not fit");
  // Choose k slots out of n - (k-1)(delta-1), then spread them apart.
  const Index slots = n - (k - 1) * (delta - 1);
  std::vector<Index> pos = sample_without_replacement(slots, k, rng);
  std::sort(pos.begin(), pos.end());
  Signal x = Signal::Zero(n);
  for (Index i = 0; i < k; ++i) x(pos[static_cast<std::size_t>(i)] + i * (delta - 1)) = uniform(rng, 1.0, 2.0);
  if (!models::DispersiveModel{k, delta, n}.admits(Support::of(x)))
    throw ModelViolation("spike_train: generated support violates the dispersive model");
  return x;
}

/// Additive noise with l2 norm exactly `level`.
inline Signal noise_vector(Index m, double level, Rng& rng) {
  Signal e = gaussian_vector(m, rng);
  if (level == 0.0) return Signal::Zero(m);
  const double ne = e.norm();
  return ne > 0.0 ? Signal(e * (level / ne)) : Signal::Zero(m);
}

/// s x s image with 2-4 axis-aligned constant blobs. Intensities are
/// multiples of 1/255 in [0.5, 1], so 8-bit PGM storage is exact.
inline Signal blob_image(Index s, Rng& rng) {
  Signal x = Signal::Zero(s * s);
  const Index blobs = uniform_index(rng, 2, 4);
  const Index max_side = std::max<Index>(2, s / 3);
  for (Index b = 0; b < blobs; ++b) {
    const Index h = uniform_index(rng, 2, max_side);
    const Index w = uniform_index(rng, 2, max_side);
    const Index r0 = uniform_index(rng, 0, s - h);
    const Index c0 = uniform_index(rng, 0, s - w);
    const double level = static_cast<double>(uniform_index(rng, 128, 255)) / 255.0;
    for (Index r = r0; r < r0 + h; ++r)
      for (Index c = c0; c < c0 + w; ++c) x(r * s + c) = level;
  }
  return x;
}

/// Rooted-connected support of size k grown from the roots, coefficients
/// with random sign and magnitude in [1, 2] halved at every level.
inline Signal tree_sparse_coefficients(const Tree& tree, Index k, Rng& rng) {
  if (k < 1 || k > tree.size()) throw InvalidParameter("tree_sparse_coefficients: need 1 <= k <= n");
  Signal c = Signal::Zero(tree.size());
  std::vector<Index> frontier(tree.roots().begin(), tree.roots().end());
  for (Index chosen = 0; chosen < k; ++chosen) {
    const auto pick = static_cast<std::size_t>(uniform_index(rng, 0, static_cast<Index>(frontier.size()) - 1));
    const Index v = frontier[pick];
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));
    const double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    c(v) = sign * uniform(rng, 1.0, 2.0) * std::pow(0.5, tree.level(v));
    frontier.insert(frontier.end(), tree.children(v).begin(), tree.children(v).end());
  }
  if (!tree.is_rooted_connected(Support::of(c)))
    throw ModelViolation("tree_sparse_coefficients: support is not rooted-connected");
  return c;
}

}  // namespace structsparse::harness
