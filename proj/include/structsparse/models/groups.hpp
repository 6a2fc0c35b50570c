#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/index_bitset.hpp"
#include "structsparse/core/signal.hpp"

namespace structsparse::models {

/// A collection of (possibly overlapping) groups over {0..n-1} with
/// non-negative weights. Membership is precomputed; `loopless()` is true when
/// every element lies in at most two groups and the group-intersection graph
/// is a forest.
class GroupStructure {
 public:
  GroupStructure(Index n, std::vector<std::vector<Index>> groups, std::vector<double> weights = {})
      : n_(n), groups_(std::move(groups)), weights_(std::move(weights)) {
    if (weights_.empty()) weights_.assign(groups_.size(), 1.0);
    if (weights_.size() != groups_.size()) throw InvalidParameter("GroupStructure: one weight per group");
    membership_.assign(static_cast<std::size_t>(n_), {});
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      auto& grp = groups_[g];
      std::sort(grp.begin(), grp.end());
      grp.erase(std::unique(grp.begin(), grp.end()), grp.end());
      if (grp.empty()) throw InvalidParameter("GroupStructure: empty group");
      if (grp.front() < 0 || grp.back() >= n_) throw InvalidParameter("GroupStructure: element out of range");
      if (!(weights_[g] >= 0.0)) throw InvalidParameter("GroupStructure: negative weight");
      for (Index i : grp) membership_[static_cast<std::size_t>(i)].push_back(static_cast<Index>(g));
    }
    loopless_ = compute_loopless();
  }

  Index ambient() const noexcept { return n_; }
  Index count() const noexcept { return static_cast<Index>(groups_.size()); }
  const std::vector<Index>& group(Index g) const { return groups_[static_cast<std::size_t>(g)]; }
  const std::vector<std::vector<Index>>& groups() const noexcept { return groups_; }
  double weight(Index g) const { return weights_[static_cast<std::size_t>(g)]; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  /// Groups containing element i.
  const std::vector<Index>& groups_of(Index i) const { return membership_[static_cast<std::size_t>(i)]; }
  bool loopless() const noexcept { return loopless_; }

  /// Bi-adjacency matrix A (n x M) with A(i, g) = 1 iff i in group g.
  Eigen::MatrixXd biadjacency() const {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_, count());
    for (Index g = 0; g < count(); ++g)
      for (Index i : group(g)) A(i, g) = 1.0;
    return A;
  }

  /// Union of the listed groups.
  Support cover(const std::vector<Index>& selected) const {
    std::vector<Index> all;
    for (Index g : selected) all.insert(all.end(), group(g).begin(), group(g).end());
    return Support(n_, std::move(all));
  }

 private:
  bool compute_loopless() const {
    std::vector<Index> uf(groups_.size());
    std::iota(uf.begin(), uf.end(), Index{0});
    auto find = [&](Index a) {
      while (uf[static_cast<std::size_t>(a)] != a) a = uf[static_cast<std::size_t>(a)];
      return a;
    };
    std::vector<std::pair<Index, Index>> edges;
    for (const auto& m : membership_) {
      if (m.size() > 2) return false;
      if (m.size() == 2) edges.emplace_back(m[0], m[1]);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (auto [a, b] : edges) {
      const Index ra = find(a), rb = find(b);
      if (ra == rb) return false;
      uf[static_cast<std::size_t>(ra)] = rb;
    }
    return true;
  }

  Index n_;
  std::vector<std::vector<Index>> groups_;
  std::vector<double> weights_;
  std::vector<std::vector<Index>> membership_;
  bool loopless_ = false;
};

struct GroupSelection {
  std::vector<Index> groups;  // sorted
  Support covered;            // selected elements (union of groups for cover problems)
  double weight = 0.0;
};

/// Greedy weighted maximum coverage: repeatedly add the group with the largest
/// marginal covered weight (lowest index on ties) until G groups are chosen
/// or no group adds positive weight.
inline GroupSelection greedy_wmc(const Signal& c, const GroupStructure& gs, Index G) {
  if (c.size() != gs.ambient()) throw InvalidParameter("greedy_wmc: length mismatch");
  if (G < 1) throw InvalidParameter("greedy_wmc: need G >= 1");
  std::vector<bool> covered(static_cast<std::size_t>(gs.ambient()), false);
  std::vector<bool> used(static_cast<std::size_t>(gs.count()), false);
  GroupSelection out;
  for (Index round = 0; round < G; ++round) {
    Index best = -1;
    double best_gain = 0.0;
    for (Index g = 0; g < gs.count(); ++g) {
      if (used[static_cast<std::size_t>(g)]) continue;
      double gain = 0.0;
      for (Index i : gs.group(g))
        if (!covered[static_cast<std::size_t>(i)]) gain += c(i);
      if (gain > best_gain) {
        best_gain = gain;
        best = g;
      }
    }
    if (best < 0) break;
    used[static_cast<std::size_t>(best)] = true;
    for (Index i : gs.group(best)) covered[static_cast<std::size_t>(i)] = true;
    out.groups.push_back(best);
  }
  std::sort(out.groups.begin(), out.groups.end());
  out.covered = gs.cover(out.groups);
  for (Index i : out.covered) out.weight += c(i);
  return out;
}

namespace detail {

constexpr double kInfeasible = -std::numeric_limits<double>::infinity();

struct GroupCell {
  double value = kInfeasible;
  IndexBitset groups;
  IndexBitset elements;
  bool valid() const { return value != kInfeasible; }
};

inline bool cell_better(double v, const IndexBitset& g, const IndexBitset& e, const GroupCell& inc) {
  if (!inc.valid() || v > inc.value) return true;
  if (v < inc.value) return false;
  if (g.lex_less(inc.groups)) return true;
  if (inc.groups.lex_less(g)) return false;
  return e.lex_less(inc.elements);
}

inline void offer(GroupCell& dst, double v, const IndexBitset& g, const IndexBitset& e) {
  if (dst.valid() && v < dst.value) return;
  if (cell_better(v, g, e, dst)) {
    dst.value = v;
    dst.groups = g;
    dst.elements = e;
  }
}

// Rooted view of the loopless group forest: for every group its parent, the
// elements it shares with that parent, and the elements it owns alone.
struct GroupForest {
  std::vector<Index> parent;
  std::vector<std::vector<Index>> children;
  std::vector<std::vector<Index>> shared_with_parent;
  std::vector<std::vector<Index>> private_elems;
  std::vector<Index> roots;
  std::vector<Index> order;  // parents before children
};

inline GroupForest build_group_forest(const GroupStructure& gs) {
  if (!gs.loopless())
    throw ModelViolation("group structure is not loopless pairwise overlapping");
  const auto M = static_cast<std::size_t>(gs.count());
  std::map<std::pair<Index, Index>, std::vector<Index>> shared;
  GroupForest f;
  f.parent.assign(M, -1);
  f.children.assign(M, {});
  f.shared_with_parent.assign(M, {});
  f.private_elems.assign(M, {});
  std::vector<std::vector<Index>> adj(M);
  for (Index i = 0; i < gs.ambient(); ++i) {
    const auto& m = gs.groups_of(i);
    if (m.size() == 1) f.private_elems[static_cast<std::size_t>(m[0])].push_back(i);
    if (m.size() == 2) {
      auto& s = shared[{m[0], m[1]}];
      if (s.empty()) {
        adj[static_cast<std::size_t>(m[0])].push_back(m[1]);
        adj[static_cast<std::size_t>(m[1])].push_back(m[0]);
      }
      s.push_back(i);
    }
  }
  std::vector<bool> seen(M, false);
  for (Index r = 0; r < static_cast<Index>(M); ++r) {
    if (seen[static_cast<std::size_t>(r)]) continue;
    seen[static_cast<std::size_t>(r)] = true;
    f.roots.push_back(r);
    const std::size_t start = f.order.size();
    f.order.push_back(r);
    for (std::size_t h = start; h < f.order.size(); ++h) {
      const Index g = f.order[h];
      auto nb = adj[static_cast<std::size_t>(g)];
      std::sort(nb.begin(), nb.end());
      for (Index c : nb) {
        if (seen[static_cast<std::size_t>(c)]) continue;
        seen[static_cast<std::size_t>(c)] = true;
        f.parent[static_cast<std::size_t>(c)] = g;
        f.children[static_cast<std::size_t>(g)].push_back(c);
        f.shared_with_parent[static_cast<std::size_t>(c)] = shared[{std::min(g, c), std::max(g, c)}];
        f.order.push_back(c);
      }
    }
  }
  return f;
}

// Best e-element subsets of `elems` for every e, by value (desc) then index.
inline std::vector<std::pair<double, IndexBitset>> top_prefixes(const Signal& c, std::vector<Index> elems,
                                                                Index cap, Index n) {
  std::stable_sort(elems.begin(), elems.end(), [&](Index a, Index b) { return c(a) > c(b); });
  std::vector<std::pair<double, IndexBitset>> out;
  out.emplace_back(0.0, IndexBitset(n));
  for (std::size_t t = 0; t < elems.size() && static_cast<Index>(t) < cap; ++t) {
    auto next = out.back();
    next.first += c(elems[t]);
    next.second.set(elems[t]);
    out.push_back(std::move(next));
  }
  return out;
}

// table[s][b][e]; for the cover problem e is fixed at 0.
using GroupTable = std::vector<std::vector<std::vector<GroupCell>>>;

inline GroupTable empty_table(Index b_cap, Index e_cap) {
  return GroupTable(2, std::vector<std::vector<GroupCell>>(
                           static_cast<std::size_t>(b_cap + 1),
                           std::vector<GroupCell>(static_cast<std::size_t>(e_cap + 1))));
}

// Element-budgeted group DP. With `sparse == false` every element of a
// selected group counts (weighted coverage) and the e dimension stays 0.
inline std::vector<std::vector<GroupCell>> loopless_profile(const Signal& c, const GroupStructure& gs,
                                                            Index G, Index K, bool sparse) {
  const GroupForest f = build_group_forest(gs);
  const Index n = gs.ambient();
  const Index M = gs.count();
  const Index ecap = sparse ? K : 0;
  const IndexBitset no_groups(M), no_elems(n);

  auto all_of = [&](const std::vector<Index>& elems) {
    double v = 0.0;
    IndexBitset bits(n);
    for (Index i : elems) {
      v += c(i);
      bits.set(i);
    }
    return std::make_pair(v, bits);
  };

  std::vector<GroupTable> tables(static_cast<std::size_t>(M));
  for (auto it = f.order.rbegin(); it != f.order.rend(); ++it) {
    const Index g = *it;
    GroupTable cur = empty_table(std::min<Index>(G, 1), ecap);
    cur[0][0][0] = {0.0, no_groups, no_elems};
    if (G >= 1) {
      IndexBitset gbit(M);
      gbit.set(g);
      if (sparse) {
        const auto pre = top_prefixes(c, f.private_elems[static_cast<std::size_t>(g)], K, n);
        for (std::size_t e = 0; e < pre.size(); ++e) cur[1][1][e] = {pre[e].first, gbit, pre[e].second};
      } else {
        auto [v, bits] = all_of(f.private_elems[static_cast<std::size_t>(g)]);
        cur[1][1][0] = {v, gbit, bits};
      }
    }
    for (Index ch : f.children[static_cast<std::size_t>(g)]) {
      const GroupTable& T = tables[static_cast<std::size_t>(ch)];
      const auto& shared = f.shared_with_parent[static_cast<std::size_t>(ch)];
      const Index bt = static_cast<Index>(T[0].size()) - 1;
      const Index bc = static_cast<Index>(cur[0].size()) - 1;
      const Index btop = std::min(G, bt + bc);
      GroupTable next = empty_table(btop, ecap);
      for (int s = 0; s < 2; ++s) {
        // Child side folded with the shared elements, given parent state s.
        std::vector<std::vector<GroupCell>> side(static_cast<std::size_t>(bt + 1),
                                                 std::vector<GroupCell>(static_cast<std::size_t>(ecap + 1)));
        for (int sc = 0; sc < 2; ++sc) {
          const bool open = s == 1 || sc == 1;
          std::vector<std::pair<double, IndexBitset>> extra;
          if (!open) {
            extra.emplace_back(0.0, no_elems);
          } else if (sparse) {
            extra = top_prefixes(c, shared, K, n);
          } else {
            extra.push_back(all_of(shared));
          }
          for (Index b = 0; b <= bt; ++b)
            for (Index e = 0; e <= ecap; ++e) {
              const GroupCell& cell = T[static_cast<std::size_t>(sc)][static_cast<std::size_t>(b)][static_cast<std::size_t>(e)];
              if (!cell.valid()) continue;
              for (std::size_t x = 0; x < extra.size() && e + static_cast<Index>(x) <= ecap; ++x)
                offer(side[static_cast<std::size_t>(b)][static_cast<std::size_t>(e + static_cast<Index>(x))],
                      cell.value + extra[x].first, cell.groups, cell.elements | extra[x].second);
            }
        }
        for (Index a = 0; a <= bc; ++a)
          for (Index ea = 0; ea <= ecap; ++ea) {
            const GroupCell& L = cur[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)][static_cast<std::size_t>(ea)];
            if (!L.valid()) continue;
            for (Index b = 0; b <= bt && a + b <= btop; ++b)
              for (Index eb = 0; ea + eb <= ecap; ++eb) {
                const GroupCell& R = side[static_cast<std::size_t>(b)][static_cast<std::size_t>(eb)];
                if (!R.valid()) continue;
                offer(next[static_cast<std::size_t>(s)][static_cast<std::size_t>(a + b)][static_cast<std::size_t>(ea + eb)],
                      L.value + R.value, L.groups | R.groups, L.elements | R.elements);
              }
          }
      }
      cur = std::move(next);
      GroupTable().swap(tables[static_cast<std::size_t>(ch)]);
    }
    tables[static_cast<std::size_t>(g)] = std::move(cur);
  }

  // Combine the component roots.
  std::vector<std::vector<GroupCell>> total(1, std::vector<GroupCell>(static_cast<std::size_t>(ecap + 1)));
  total[0][0] = {0.0, no_groups, no_elems};
  for (Index r : f.roots) {
    const GroupTable& T = tables[static_cast<std::size_t>(r)];
    const Index bt = static_cast<Index>(T[0].size()) - 1;
    const Index bc = static_cast<Index>(total.size()) - 1;
    const Index btop = std::min(G, bt + bc);
    std::vector<std::vector<GroupCell>> next(static_cast<std::size_t>(btop + 1),
                                             std::vector<GroupCell>(static_cast<std::size_t>(ecap + 1)));
    for (Index a = 0; a <= bc; ++a)
      for (Index ea = 0; ea <= ecap; ++ea) {
        const GroupCell& L = total[static_cast<std::size_t>(a)][static_cast<std::size_t>(ea)];
        if (!L.valid()) continue;
        for (int s = 0; s < 2; ++s)
          for (Index b = 0; b <= bt && a + b <= btop; ++b)
            for (Index eb = 0; ea + eb <= ecap; ++eb) {
              const GroupCell& R = T[static_cast<std::size_t>(s)][static_cast<std::size_t>(b)][static_cast<std::size_t>(eb)];
              if (!R.valid()) continue;
              offer(next[static_cast<std::size_t>(a + b)][static_cast<std::size_t>(ea + eb)], L.value + R.value,
                    L.groups | R.groups, L.elements | R.elements);
            }
      }
    total = std::move(next);
  }
  return total;
}

inline GroupSelection pick_best(const std::vector<std::vector<GroupCell>>& total, Index n) {
  const GroupCell* best = nullptr;
  for (const auto& row : total)
    for (const auto& cell : row)
      if (cell.valid() && (!best || cell.value > best->value)) best = &cell;
  GroupSelection out;
  out.groups = best->groups.members();
  out.covered = Support(n, best->elements.members());
  out.weight = best->value;
  return out;
}

inline void check_weights(const Signal& c, const GroupStructure& gs) {
  if (c.size() != gs.ambient()) throw InvalidParameter("group DP: length mismatch");
  if ((c.array() < 0.0).any()) throw InvalidParameter("group DP: weights must be non-negative");
}

}  // namespace detail

/// Exact weighted maximum coverage with at most G groups on a loopless
/// pairwise-overlapping structure, by dynamic programming over the group
/// forest (state: group, selected or not, groups used in its subtree).
/// Ties: fewest groups, then the lexicographically smallest group set.
inline GroupSelection dp_loopless_groups(const Signal& c, const GroupStructure& gs, Index G) {
  detail::check_weights(c, gs);
  if (G < 0) throw InvalidParameter("dp_loopless_groups: negative group budget");
  const auto total = detail::loopless_profile(c, gs, G, 0, false);
  GroupSelection out = detail::pick_best(total, gs.ambient());
  out.covered = gs.cover(out.groups);
  return out;
}

/// Sparse-group variant: at most G groups and at most K selected elements,
/// every selected element lying in a selected group. Maximizes the total
/// weight of the selected elements.
inline GroupSelection dp_loopless_groups_sparse(const Signal& c, const GroupStructure& gs, Index G, Index K) {
  detail::check_weights(c, gs);
  if (G < 0) throw InvalidParameter("dp_loopless_groups_sparse: negative group budget");
  if (K < 1 || K > gs.ambient()) throw InvalidParameter("dp_loopless_groups_sparse: need 1 <= K <= n");
  const auto total = detail::loopless_profile(c, gs, G, K, true);
  return detail::pick_best(total, gs.ambient());
}

/// Group "l0 norm": the minimum number of groups whose union covers supp(x).
/// std::nullopt when some support element belongs to no group. Exact by DP on
/// loopless structures, by enumeration otherwise (up to 20 groups).
inline std::optional<Index> group_l0(const Signal& x, const GroupStructure& gs) {
  if (x.size() != gs.ambient()) throw InvalidParameter("group_l0: length mismatch");
  const Support supp = Support::of(x);
  for (Index i : supp)
    if (gs.groups_of(i).empty()) return std::nullopt;
  if (supp.empty()) return 0;

  if (gs.loopless()) {
    Signal ind = Signal::Zero(x.size());
    for (Index i : supp) ind(i) = 1.0;
    const auto total = detail::loopless_profile(ind, gs, gs.count(), 0, false);
    const auto need = static_cast<double>(supp.size());
    for (std::size_t b = 0; b < total.size(); ++b)
      if (total[b][0].valid() && total[b][0].value == need) return static_cast<Index>(b);
    return std::nullopt;
  }
  if (gs.count() > 20) throw CapabilityError("group_l0: more than 20 groups on a loopy structure");

  // Bitmask of covered support positions for each group.
  const Index s = static_cast<Index>(supp.size());
  std::vector<IndexBitset> masks(static_cast<std::size_t>(gs.count()), IndexBitset(s));
  for (Index t = 0; t < s; ++t)
    for (Index g : gs.groups_of(supp.indices()[static_cast<std::size_t>(t)])) masks[static_cast<std::size_t>(g)].set(t);
  IndexBitset full(s);
  for (Index t = 0; t < s; ++t) full.set(t);
  Index best = gs.count() + 1;
  const std::uint32_t limit = std::uint32_t{1} << gs.count();
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    const Index cnt = std::popcount(mask);
    if (cnt >= best) continue;
    IndexBitset cov(s);
    for (Index g = 0; g < gs.count(); ++g)
      if (mask >> g & 1u) cov |= masks[static_cast<std::size_t>(g)];
    if (cov == full) best = cnt;
  }
  return best;
}

/// Weighted twin of group_l0: minimum total group weight of a cover of
/// supp(x), by enumeration (at most 20 groups).
inline std::optional<double> group_l0_weighted(const Signal& x, const GroupStructure& gs) {
  if (x.size() != gs.ambient()) throw InvalidParameter("group_l0_weighted: length mismatch");
  if (gs.count() > 20) throw CapabilityError("group_l0_weighted: more than 20 groups");
  const Support supp = Support::of(x);
  for (Index i : supp)
    if (gs.groups_of(i).empty()) return std::nullopt;
  const Index s = static_cast<Index>(supp.size());
  std::vector<IndexBitset> masks(static_cast<std::size_t>(gs.count()), IndexBitset(s));
  for (Index t = 0; t < s; ++t)
    for (Index g : gs.groups_of(supp.indices()[static_cast<std::size_t>(t)])) masks[static_cast<std::size_t>(g)].set(t);
  IndexBitset full(s);
  for (Index t = 0; t < s; ++t) full.set(t);
  double best = std::numeric_limits<double>::infinity();
  const std::uint32_t limit = std::uint32_t{1} << gs.count();
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    double w = 0.0;
    IndexBitset cov(s);
    for (Index g = 0; g < gs.count(); ++g)
      if (mask >> g & 1u) {
        cov |= masks[static_cast<std::size_t>(g)];
        w += gs.weight(g);
      }
    if (cov == full) best = std::min(best, w);
  }
  return best;
}

}  // namespace structsparse::models
