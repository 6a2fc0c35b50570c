#pragma once

#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/haar.hpp"
#include "structsparse/core/signal.hpp"

namespace structsparse {

/// Rooted forest over nodes 0..n-1 given by parent links.
class Tree {
 public:
  static constexpr Index kNoParent = -1;

  Tree() = default;

  /// Validates the links: every parent is in range or kNoParent, and
  /// following parents from any node terminates.
  explicit Tree(std::vector<Index> parent) : parent_(std::move(parent)) {
    const Index n = size();
    children_.assign(static_cast<std::size_t>(n), {});
    for (Index v = 0; v < n; ++v) {
      const Index p = parent_[static_cast<std::size_t>(v)];
      if (p == kNoParent) {
        roots_.push_back(v);
      } else if (p < 0 || p >= n || p == v) {
        throw InvalidParameter("Tree: invalid parent index");
      } else {
        children_[static_cast<std::size_t>(p)].push_back(v);
      }
    }
    // Level assignment by BFS from the roots; anything unreached is on a cycle.
    level_.assign(static_cast<std::size_t>(n), -1);
    order_.clear();
    for (Index r : roots_) {
      level_[static_cast<std::size_t>(r)] = 0;
      order_.push_back(r);
    }
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const Index v = order_[head];
      for (Index c : children_[static_cast<std::size_t>(v)]) {
        level_[static_cast<std::size_t>(c)] = level_[static_cast<std::size_t>(v)] + 1;
        order_.push_back(c);
      }
    }
    if (static_cast<Index>(order_.size()) != n) throw InvalidParameter("Tree: parent links contain a cycle");
  }

  Index size() const noexcept { return static_cast<Index>(parent_.size()); }
  Index parent(Index v) const { return parent_[static_cast<std::size_t>(v)]; }
  const std::vector<Index>& parents() const noexcept { return parent_; }
  const std::vector<Index>& children(Index v) const { return children_[static_cast<std::size_t>(v)]; }
  const std::vector<Index>& roots() const noexcept { return roots_; }
  int level(Index v) const { return level_[static_cast<std::size_t>(v)]; }
  /// Nodes in breadth-first order (parents before children).
  const std::vector<Index>& bfs_order() const noexcept { return order_; }

  /// True iff s contains the parent of each of its non-root members.
  bool is_rooted_connected(const Support& s) const {
    for (Index v : s) {
      const Index p = parent(v);
      if (p != kNoParent && !s.contains(p)) return false;
    }
    return true;
  }

  /// Node v together with all of its descendants, sorted.
  std::vector<Index> descendants(Index v) const {
    std::vector<Index> out{v};
    for (std::size_t h = 0; h < out.size(); ++h)
      for (Index c : children(out[h])) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<Index> parent_;
  std::vector<std::vector<Index>> children_;
  std::vector<Index> roots_;
  std::vector<int> level_;
  std::vector<Index> order_;
};

/// Parent/child structure of the 2-D Haar pyramid on a p x p grid (row-major
/// coefficient index r*p + c). The scaling coefficient is the root; its three
/// children are the coarsest detail coefficients, and every other detail
/// coefficient (r,c) with 2r < p has the four children (2r+a, 2c+b).
inline Tree wavelet_quadtree(Index p) {
  if (p < 2 || !is_power_of_two(p)) throw InvalidParameter("wavelet_quadtree: p must be a power of two >= 2");
  std::vector<Index> parent(static_cast<std::size_t>(p * p), Tree::kNoParent);
  for (Index r = 0; r < p; ++r) {
    for (Index c = 0; c < p; ++c) {
      if (r == 0 && c == 0) continue;
      Index pr, pc;
      if (r <= 1 && c <= 1) {
        pr = 0;
        pc = 0;
      } else {
        pr = r / 2;
        pc = c / 2;
      }
      parent[static_cast<std::size_t>(r * p + c)] = pr * p + pc;
    }
  }
  return Tree(std::move(parent));
}

}  // namespace structsparse
