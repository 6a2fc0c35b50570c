#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "structsparse/core/errors.hpp"

namespace structsparse {

using Index = std::ptrdiff_t;

/// Dense real coefficient vector.
using Signal = Eigen::VectorXd;

inline Signal make_signal(std::initializer_list<double> values) {
  Signal x(static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) x(i++) = v;
  return x;
}

inline bool all_finite(const Signal& x) { return x.allFinite(); }

/// Sorted, duplicate-free index set over an ambient dimension n.
class Support {
 public:
  Support() = default;

  explicit Support(Index n) : n_(n) {
    if (n < 0) throw InvalidParameter("Support: negative ambient dimension");
  }

  /// Sorts and deduplicates; throws if any index falls outside [0, n).
  Support(Index n, std::vector<Index> indices) : n_(n), idx_(std::move(indices)) {
    std::sort(idx_.begin(), idx_.end());
    idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
    if (!idx_.empty() && (idx_.front() < 0 || idx_.back() >= n_))
      throw InvalidParameter("Support: index out of range");
  }

  /// Indices with |x_i| > threshold.
  static Support of(const Signal& x, double threshold = 0.0) {
    std::vector<Index> idx;
    for (Index i = 0; i < x.size(); ++i)
      if (std::abs(x(i)) > threshold) idx.push_back(i);
    Support s;
    s.n_ = x.size();
    s.idx_ = std::move(idx);
    return s;
  }

  Index ambient() const noexcept { return n_; }
  std::size_t size() const noexcept { return idx_.size(); }
  bool empty() const noexcept { return idx_.empty(); }
  const std::vector<Index>& indices() const noexcept { return idx_; }
  auto begin() const noexcept { return idx_.begin(); }
  auto end() const noexcept { return idx_.end(); }

  bool contains(Index i) const {
    return std::binary_search(idx_.begin(), idx_.end(), i);
  }

  std::vector<bool> indicator() const {
    std::vector<bool> mask(static_cast<std::size_t>(n_), false);
    for (Index i : idx_) mask[static_cast<std::size_t>(i)] = true;
    return mask;
  }

  friend bool operator==(const Support& a, const Support& b) {
    return a.n_ == b.n_ && a.idx_ == b.idx_;
  }

 private:
  Index n_ = 0;
  std::vector<Index> idx_;
};

/// Copy of x restricted to s (zero elsewhere).
inline Signal restrict_to(const Signal& x, const Support& s) {
  Signal y = Signal::Zero(x.size());
  for (Index i : s) y(i) = x(i);
  return y;
}

/// Sum of x_i^2 over s, accumulated in index order.
inline double energy_on(const Signal& x, const Support& s) {
  double e = 0.0;
  for (Index i : s) e += x(i) * x(i);
  return e;
}

}  // namespace structsparse
