#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/signal.hpp"

namespace structsparse::models {

/// Spike-train model: at most k nonzeros, consecutive indices at least
/// `delta` apart. This is the sliding-window reading: every window of delta
/// consecutive samples holds at most one spike. A strict "|i-j| > d" model is
/// DispersiveModel{k, d + 1, n}.
struct DispersiveModel {
  Index k = 1;
  Index delta = 1;
  Index n = 1;

  void validate() const {
    if (n < 1) throw InvalidParameter("DispersiveModel: n must be >= 1");
    if (k < 1 || k > n) throw InvalidParameter("DispersiveModel: need 1 <= k <= n");
    if (delta < 1 || delta > n) throw InvalidParameter("DispersiveModel: need 1 <= delta <= n");
  }

  bool admits(const Support& s) const {
    if (static_cast<Index>(s.size()) > k) return false;
    const auto& idx = s.indices();
    for (std::size_t t = 1; t < idx.size(); ++t)
      if (idx[t] - idx[t - 1] < delta) return false;
    return true;
  }
};

struct Projection {
  Signal signal;
  Support support;
};

/// Exact projection onto the dispersive model. Maximizes the captured energy
/// sum_{i in S} x_i^2 with an O(n k) dynamic program over (position, spikes
/// left). Among optimal supports the lexicographically smallest is returned.
inline Projection project_dispersive(const Signal& x, const DispersiveModel& model) {
  model.validate();
  const Index n = x.size();
  if (n != model.n) throw InvalidParameter("project_dispersive: length mismatch");
  const Index k = model.k;
  const Index delta = model.delta;
  const auto width = static_cast<std::size_t>(k + 1);
  constexpr double kNone = -std::numeric_limits<double>::infinity();

  // best[i][j]: max energy using positions >= i with at most j spikes.
  std::vector<double> best(static_cast<std::size_t>(n + 1) * width, 0.0);
  auto at = [&](Index i, Index j) -> double& { return best[static_cast<std::size_t>(i) * width + static_cast<std::size_t>(j)]; };
  auto take_value = [&](Index i, Index j) {
    const double c = x(i) * x(i);
    if (!(c > 0.0)) return kNone;
    return c + at(std::min(i + delta, n), j - 1);
  };

  for (Index i = n - 1; i >= 0; --i)
    for (Index j = 1; j <= k; ++j) at(i, j) = std::max(at(i + 1, j), take_value(i, j));

  std::vector<Index> chosen;
  Index i = 0, j = k;
  while (j > 0 && i < n && at(i, j) > 0.0) {
    const double target = at(i, j);
    while (take_value(i, j) != target) ++i;
    chosen.push_back(i);
    i = std::min(i + delta, n);
    --j;
  }
  Support s(n, std::move(chosen));
  return {restrict_to(x, s), std::move(s)};
}

}  // namespace structsparse::models
