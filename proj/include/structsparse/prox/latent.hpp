#pragma once

#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/linear_operator.hpp"
#include "structsparse/core/tree.hpp"
#include "structsparse/prox/norms.hpp"

namespace structsparse::prox {

/// Latent copies of the variables, one contiguous block per group. Block g
/// holds copies of the members of group g, in order.
class DuplicationMap {
 public:
  DuplicationMap() = default;

  DuplicationMap(Index n, const Groups& groups, std::vector<double> weights = {})
      : n_(n), weights_(std::move(weights)) {
    if (weights_.empty()) weights_.assign(groups.size(), 1.0);
    if (weights_.size() != groups.size()) throw InvalidParameter("DuplicationMap: one weight per group");
    for (const auto& g : groups) {
      std::vector<Index> block;
      for (Index i : g) {
        if (i < 0 || i >= n_) throw InvalidParameter("DuplicationMap: index out of range");
        block.push_back(static_cast<Index>(source_.size()));
        source_.push_back(i);
      }
      blocks_.push_back(std::move(block));
    }
  }

  Index ambient() const noexcept { return n_; }
  Index latent_size() const noexcept { return static_cast<Index>(source_.size()); }
  std::size_t group_count() const noexcept { return blocks_.size(); }
  /// Original index of a latent coordinate.
  Index source(Index latent) const { return source_[static_cast<std::size_t>(latent)]; }
  /// Latent coordinates of group g.
  const std::vector<Index>& block(std::size_t g) const { return blocks_[g]; }
  const Groups& blocks() const noexcept { return blocks_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Copy x into every latent slot.
  Signal expand(const Signal& x) const {
    Signal z(latent_size());
    for (Index j = 0; j < latent_size(); ++j) z(j) = x(source(j));
    return z;
  }

  /// Sum the latent copies back: x = sum_G v^G.
  Signal collapse(const Signal& z) const {
    Signal x = Signal::Zero(n_);
    for (Index j = 0; j < latent_size(); ++j) x(source(j)) += z(j);
    return x;
  }

  /// Number of copies of every original index.
  Signal multiplicity() const {
    Signal c = Signal::Zero(n_);
    for (Index j = 0; j < latent_size(); ++j) c(source(j)) += 1.0;
    return c;
  }

  /// collapse() as an n x latent_size() operator (adjoint = expand).
  LinearOperator collapse_operator() const {
    auto self = *this;
    return make_custom(n_, latent_size(), [self](const Signal& z) { return self.collapse(z); },
                       [self](const Signal& x) { return self.expand(x); });
  }

 private:
  Index n_ = 0;
  std::vector<Index> source_;
  Groups blocks_;
  std::vector<double> weights_;
};

enum class LatentFamily {
  parent_child,  // {parent, child} for every edge
  family,        // a node together with all of its children
};

/// Squared level of the group's node nearest the root; the root level would
/// give weight 0, which is replaced by 1.
inline double level_weight(int level) { return level == 0 ? 1.0 : static_cast<double>(level) * level; }

inline DuplicationMap build_latent(const Tree& tree, LatentFamily kind) {
  Groups groups;
  std::vector<double> weights;
  for (Index v = 0; v < tree.size(); ++v) {
    if (kind == LatentFamily::parent_child) {
      for (Index c : tree.children(v)) {
        groups.push_back({v, c});
        weights.push_back(level_weight(tree.level(v)));
      }
    } else if (!tree.children(v).empty()) {
      std::vector<Index> g{v};
      g.insert(g.end(), tree.children(v).begin(), tree.children(v).end());
      groups.push_back(std::move(g));
      weights.push_back(level_weight(tree.level(v)));
    }
  }
  return DuplicationMap(tree.size(), groups, std::move(weights));
}

/// Prox of lambda sum_G w_G ||v^G||_2 on the latent vector: block
/// soft-thresholding, the latent blocks being disjoint.
inline Signal latent_group_prox(const Signal& z, const DuplicationMap& map, double lambda) {
  if (z.size() != map.latent_size()) throw InvalidParameter("latent_group_prox: length mismatch");
  if (lambda < 0.0) throw InvalidParameter("latent_group_prox: lambda must be >= 0");
  return block_soft_threshold(z, map.blocks(), lambda, map.weights());
}

}  // namespace structsparse::prox
