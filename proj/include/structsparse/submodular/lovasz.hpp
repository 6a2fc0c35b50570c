#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/submodular/set_function.hpp"

namespace structsparse::submodular {

/// Lovasz extension r(x) = sum_k x_{j_k} (R({j_1..j_k}) - R({j_1..j_{k-1}}))
/// with x sorted decreasingly (stable in the index).
inline double lovasz_extension(const SetFunction& R, const Signal& x) {
  if (x.size() != R.size()) throw InvalidParameter("lovasz_extension: length mismatch");
  const auto order = descending_order(x);
  const auto gains = R.chain_gains(order);
  double r = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) r += x(order[k]) * gains[k];
  return r;
}

/// Greedy vertex of the base polytope B(R) that minimizes <w, q>: visit the
/// coordinates of w in increasing order and assign the marginal gains.
/// `order_out` receives the visiting order.
inline Signal greedy_vertex(const SetFunction& R, const Signal& w, std::vector<Index>* order_out = nullptr) {
  std::vector<Index> order(static_cast<std::size_t>(w.size()));
  for (Index i = 0; i < w.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return w(a) < w(b); });
  const auto gains = R.chain_gains(order);
  Signal q(w.size());
  for (std::size_t k = 0; k < order.size(); ++k) q(order[k]) = gains[k];
  if (order_out) *order_out = std::move(order);
  return q;
}

/// Exhaustive check of diminishing returns; equivalent to the local test
/// R(S+i) + R(S+j) >= R(S+i+j) + R(S) for all S and i, j outside S.
inline bool is_submodular(const SetFunction& R, double tol = 1e-10) {
  const Index n = R.size();
  if (n > 12) throw CapabilityError("is_submodular: exhaustive check limited to n <= 12");
  const std::uint32_t count = std::uint32_t{1} << n;
  std::vector<double> value(count);
  double scale = 1.0;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    Subset s(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
    value[mask] = R(s);
    scale = std::max(scale, std::abs(value[mask]));
  }
  for (std::uint32_t mask = 0; mask < count; ++mask)
    for (Index i = 0; i < n; ++i) {
      if (mask >> i & 1u) continue;
      for (Index j = i + 1; j < n; ++j) {
        if (mask >> j & 1u) continue;
        const std::uint32_t si = mask | (1u << i), sj = mask | (1u << j), sij = si | (1u << j);
        if (value[si] + value[sj] < value[sij] + value[mask] - tol * scale) return false;
      }
    }
  return true;
}

}  // namespace structsparse::submodular
