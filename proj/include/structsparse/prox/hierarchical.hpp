#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/tree.hpp"
#include "structsparse/prox/norms.hpp"

namespace structsparse::prox {

/// One group per node: the node together with all of its descendants.
inline Groups hierarchical_groups(const Tree& tree) {
  Groups g(static_cast<std::size_t>(tree.size()));
  // Children before parents, so every subtree list is ready when needed.
  const auto& order = tree.bfs_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Index v = *it;
    auto& grp = g[static_cast<std::size_t>(v)];
    grp.push_back(v);
    for (Index c : tree.children(v)) {
      const auto& sub = g[static_cast<std::size_t>(c)];
      grp.insert(grp.end(), sub.begin(), sub.end());
    }
  }
  for (auto& grp : g) std::sort(grp.begin(), grp.end());
  return g;
}

/// Orders groups by size and verifies they form a laminar (tree-nested)
/// family: for every group, all of its elements must agree on the next
/// larger group containing them. Returns the processing order.
inline std::vector<std::size_t> nested_order(Index n, const Groups& groups) {
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return groups[a].size() < groups[b].size(); });
  std::vector<std::size_t> rank(groups.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

  // Chain of groups (by rank) through each element.
  std::vector<std::vector<std::size_t>> chain(static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < order.size(); ++r)
    for (Index i : groups[order[r]]) {
      if (i < 0 || i >= n) throw InvalidParameter("hgl_prox: index out of range");
      chain[static_cast<std::size_t>(i)].push_back(r);
    }
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::size_t parent = kNone;
    bool first = true;
    for (Index i : groups[g]) {
      const auto& c = chain[static_cast<std::size_t>(i)];
      const auto pos = std::find(c.begin(), c.end(), rank[g]);
      const std::size_t next = pos + 1 == c.end() ? kNone : *(pos + 1);
      if (first) {
        parent = next;
        first = false;
      } else if (next != parent) {
        throw InvalidParameter("hgl_prox: groups are not nested (tree-structured)");
      }
    }
  }
  return order;
}

/// Exact prox of lambda sum_G w_G ||y_G||_2 for a tree-nested group family:
/// group soft-thresholds composed from the innermost groups outwards.
inline Signal hgl_prox(const Signal& x, const Groups& groups, double lambda,
                       const std::vector<double>& weights = {}) {
  if (lambda < 0.0) throw InvalidParameter("hgl_prox: lambda must be >= 0");
  if (!weights.empty() && weights.size() != groups.size())
    throw InvalidParameter("hgl_prox: one weight per group");
  const auto order = nested_order(x.size(), groups);
  if (lambda == 0.0) return x;
  Signal y = x;
  for (std::size_t g : order) shrink_block(y, groups[g], lambda * (weights.empty() ? 1.0 : weights[g]));
  return y;
}

}  // namespace structsparse::prox
