#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/index_bitset.hpp"
#include "structsparse/core/signal.hpp"
#include "structsparse/core/tree.hpp"
#include "structsparse/models/dispersive.hpp"

namespace structsparse::models {

/// Hierarchical model: rooted-connected supports of at most k nodes in a
/// forest (a node may be selected only together with its parent).
struct TreeModel {
  Tree tree;
  Index k = 1;

  bool admits(const Support& s) const {
    return static_cast<Index>(s.size()) <= k && tree.is_rooted_connected(s);
  }
};

namespace detail {

struct TreeCell {
  double value = -std::numeric_limits<double>::infinity();
  IndexBitset nodes;
  bool valid() const { return value != -std::numeric_limits<double>::infinity(); }
};

inline bool better(double value, const IndexBitset& a, const TreeCell& incumbent) {
  if (!incumbent.valid() || value > incumbent.value) return true;
  return value == incumbent.value && a.lex_less(incumbent.nodes);
}

// Knapsack merge of two exact-size tables. `min_left` is 1 when the left
// table describes a subtree whose root must be selected.
inline std::vector<TreeCell> merge_tables(const std::vector<TreeCell>& left,
                                          const std::vector<TreeCell>& right, Index cap,
                                          Index min_left) {
  const Index la = static_cast<Index>(left.size()) - 1;
  const Index lb = static_cast<Index>(right.size()) - 1;
  const Index top = std::min(cap, la + lb);
  std::vector<TreeCell> out(static_cast<std::size_t>(top + 1));
  for (Index a = 0; a <= la; ++a) {
    const TreeCell& L = left[static_cast<std::size_t>(a)];
    if (!L.valid()) continue;
    for (Index b = 0; b <= lb && a + b <= top; ++b) {
      if (a < min_left && b > 0) break;  // children need their parent
      const TreeCell& R = right[static_cast<std::size_t>(b)];
      if (!R.valid()) continue;
      TreeCell& dst = out[static_cast<std::size_t>(a + b)];
      const double v = L.value + R.value;
      if (dst.valid() && v < dst.value) continue;
      IndexBitset merged = L.nodes | R.nodes;
      if (better(v, merged, dst)) {
        dst.value = v;
        dst.nodes = std::move(merged);
      }
    }
  }
  return out;
}

}  // namespace detail

/// Exact rooted-connected projection by tree-knapsack dynamic programming:
/// for each node, a table indexed by the number of selected nodes in its
/// subtree (including itself). Maximizes captured energy; ties go to the
/// smallest support, then the lexicographically smallest one.
inline Projection project_rc_tree(const Signal& x, const TreeModel& model) {
  const Tree& tree = model.tree;
  const Index n = tree.size();
  if (x.size() != n) throw InvalidParameter("project_rc_tree: length mismatch");
  if (model.k < 0) throw InvalidParameter("project_rc_tree: negative budget");
  const Index k = std::min(model.k, n);

  std::vector<std::vector<detail::TreeCell>> table(static_cast<std::size_t>(n));
  const auto& order = tree.bfs_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Index v = *it;
    std::vector<detail::TreeCell> cur(static_cast<std::size_t>(std::min<Index>(k, 1) + 1));
    cur[0].value = 0.0;
    cur[0].nodes = IndexBitset(n);
    if (k >= 1) {
      cur[1].value = x(v) * x(v);
      cur[1].nodes = IndexBitset(n);
      cur[1].nodes.set(v);
    }
    for (Index c : tree.children(v)) {
      cur = detail::merge_tables(cur, table[static_cast<std::size_t>(c)], k, 1);
      std::vector<detail::TreeCell>().swap(table[static_cast<std::size_t>(c)]);
    }
    table[static_cast<std::size_t>(v)] = std::move(cur);
  }

  std::vector<detail::TreeCell> forest(1);
  forest[0].value = 0.0;
  forest[0].nodes = IndexBitset(n);
  for (Index r : tree.roots()) forest = detail::merge_tables(forest, table[static_cast<std::size_t>(r)], k, 0);

  std::size_t pick = 0;
  for (std::size_t j = 1; j < forest.size(); ++j)
    if (forest[j].valid() && forest[j].value > forest[pick].value) pick = j;

  Support s(n, forest[pick].nodes.members());
  return {restrict_to(x, s), std::move(s)};
}

}  // namespace structsparse::models
