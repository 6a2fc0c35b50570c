#pragma once

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

#include "structsparse/core/signal.hpp"

namespace structsparse::submodular {

/// Dinic's blocking-flow max-flow on a directed graph with real capacities.
/// Residual capacities at or below `eps` are treated as saturated.
class MaxFlow {
 public:
  explicit MaxFlow(Index nodes) : head_(static_cast<std::size_t>(nodes), -1) {}

  void add_arc(Index from, Index to, double cap, double reverse_cap = 0.0) {
    arcs_.push_back({to, head_[static_cast<std::size_t>(from)], cap});
    head_[static_cast<std::size_t>(from)] = static_cast<Index>(arcs_.size()) - 1;
    arcs_.push_back({from, head_[static_cast<std::size_t>(to)], reverse_cap});
    head_[static_cast<std::size_t>(to)] = static_cast<Index>(arcs_.size()) - 1;
    max_cap_ = std::max({max_cap_, cap, reverse_cap});
  }

  double solve(Index s, Index t) {
    eps_ = 1e-12 * std::max(1.0, max_cap_);
    double flow = 0.0;
    while (build_levels(s, t)) {
      iter_ = head_;
      for (;;) {
        const double pushed = augment(s, t, std::numeric_limits<double>::infinity());
        if (pushed <= eps_) break;
        flow += pushed;
      }
    }
    return flow;
  }

  /// Nodes reachable from s in the final residual graph: the source side of
  /// the minimum cut that is smallest by inclusion.
  std::vector<bool> source_side(Index s) const {
    std::vector<bool> seen(head_.size(), false);
    std::vector<Index> stack{s};
    seen[static_cast<std::size_t>(s)] = true;
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      for (Index a = head_[static_cast<std::size_t>(v)]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
        const Arc& arc = arcs_[static_cast<std::size_t>(a)];
        if (arc.cap > eps_ && !seen[static_cast<std::size_t>(arc.to)]) {
          seen[static_cast<std::size_t>(arc.to)] = true;
          stack.push_back(arc.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    Index to;
    Index next;
    double cap;
  };

  bool build_levels(Index s, Index t) {
    level_.assign(head_.size(), -1);
    std::queue<Index> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      const Index v = q.front();
      q.pop();
      for (Index a = head_[static_cast<std::size_t>(v)]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
        const Arc& arc = arcs_[static_cast<std::size_t>(a)];
        if (arc.cap > eps_ && level_[static_cast<std::size_t>(arc.to)] < 0) {
          level_[static_cast<std::size_t>(arc.to)] = level_[static_cast<std::size_t>(v)] + 1;
          q.push(arc.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  double augment(Index v, Index t, double limit) {
    if (v == t) return limit;
    for (Index& a = iter_[static_cast<std::size_t>(v)]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
      Arc& arc = arcs_[static_cast<std::size_t>(a)];
      if (arc.cap <= eps_ || level_[static_cast<std::size_t>(arc.to)] != level_[static_cast<std::size_t>(v)] + 1) continue;
      const double pushed = augment(arc.to, t, std::min(limit, arc.cap));
      if (pushed > eps_) {
        arc.cap -= pushed;
        arcs_[static_cast<std::size_t>(a ^ 1)].cap += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  std::vector<Arc> arcs_;
  std::vector<Index> head_;
  std::vector<Index> iter_;
  std::vector<int> level_;
  double max_cap_ = 0.0;
  double eps_ = 0.0;
};

}  // namespace structsparse::submodular
