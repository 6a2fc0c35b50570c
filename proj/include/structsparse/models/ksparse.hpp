#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/signal.hpp"

namespace structsparse::models {

/// Projection onto the k-sparse set: keeps the k largest magnitudes (ties go
/// to the lower index). Zero entries are never part of the returned support.
inline Signal project_ksparse(const Signal& x, Index k, Support* support = nullptr) {
  const Index n = x.size();
  if (k < 0 || k > n) throw InvalidParameter("project_ksparse: need 0 <= k <= n");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(x(a)) > std::abs(x(b)); });
  std::vector<Index> kept;
  for (Index t = 0; t < k; ++t) {
    const Index i = order[static_cast<std::size_t>(t)];
    if (x(i) == 0.0) break;
    kept.push_back(i);
  }
  Support s(n, std::move(kept));
  if (support) *support = s;
  return restrict_to(x, s);
}

}  // namespace structsparse::models
