#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/linear_operator.hpp"
#include "structsparse/core/signal.hpp"
#include "structsparse/submodular/set_function.hpp"

namespace structsparse::prox {

using Groups = std::vector<std::vector<Index>>;

/// Componentwise sign(x) max(|x| - lambda, 0).
inline Signal soft_threshold(const Signal& x, double lambda) {
  if (lambda < 0.0) throw InvalidParameter("soft_threshold: lambda must be >= 0");
  if (lambda == 0.0) return x;
  Signal y(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x(i)) - lambda;
    y(i) = a > 0.0 ? std::copysign(a, x(i)) : 0.0;
  }
  return y;
}

/// In-place shrink of one block by max(1 - t / ||x_G||, 0).
inline void shrink_block(Signal& y, const std::vector<Index>& group, double t) {
  double nrm2 = 0.0;
  for (Index i : group) nrm2 += y(i) * y(i);
  const double nrm = std::sqrt(nrm2);
  const double factor = nrm > t ? 1.0 - t / nrm : 0.0;
  for (Index i : group) y(i) *= factor;
}

/// Group soft-thresholding over a partition of {0..n-1}.
inline Signal block_soft_threshold(const Signal& x, const Groups& groups, double lambda,
                                   const std::vector<double>& weights = {}) {
  if (lambda < 0.0) throw InvalidParameter("block_soft_threshold: lambda must be >= 0");
  if (!weights.empty() && weights.size() != groups.size())
    throw InvalidParameter("block_soft_threshold: one weight per group");
  std::vector<int> hits(static_cast<std::size_t>(x.size()), 0);
  for (const auto& g : groups)
    for (Index i : g) {
      if (i < 0 || i >= x.size()) throw InvalidParameter("block_soft_threshold: index out of range");
      if (++hits[static_cast<std::size_t>(i)] > 1)
        throw InvalidParameter("block_soft_threshold: groups overlap; use the duplication path");
    }
  if (std::find(hits.begin(), hits.end(), 0) != hits.end())
    throw InvalidParameter("block_soft_threshold: groups must cover every index");
  if (lambda == 0.0) return x;
  Signal y = x;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double w = weights.empty() ? 1.0 : weights[g];
    if (w < 0.0) throw InvalidParameter("block_soft_threshold: weights must be >= 0");
    shrink_block(y, groups[g], lambda * w);
  }
  return y;
}

/// sum_G w_G ||x_G||_2.
inline double group_lasso_norm(const Signal& x, const Groups& groups, const std::vector<double>& weights = {}) {
  double v = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double s = 0.0;
    for (Index i : groups[g]) s += x(i) * x(i);
    v += (weights.empty() ? 1.0 : weights[g]) * std::sqrt(s);
  }
  return v;
}

/// Prox of lambda ||v||_1^2. With a = |v| sorted decreasingly, the output is
/// sign(v) max(|v| - t, 0) where t = 2 lambda S_k / (1 + 2 lambda k) for the
/// largest k whose k-th magnitude still exceeds its own threshold.
inline Signal prox_sq_l1(const Signal& v, double lambda) {
  if (lambda < 0.0) throw InvalidParameter("prox_sq_l1: lambda must be >= 0");
  if (lambda == 0.0) return v;
  const Index n = v.size();
  std::vector<double> a(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = std::abs(v(i));
  std::sort(a.begin(), a.end(), std::greater<>());
  double prefix = 0.0, t = 0.0;
  for (Index k = 1; k <= n; ++k) {
    prefix += a[static_cast<std::size_t>(k - 1)];
    const double tk = 2.0 * lambda * prefix / (1.0 + 2.0 * lambda * static_cast<double>(k));
    if (a[static_cast<std::size_t>(k - 1)] > tk) t = tk;
    else break;
  }
  Signal y(n);
  for (Index i = 0; i < n; ++i) {
    const double m = std::abs(v(i)) - t;
    y(i) = m > 0.0 ? std::copysign(m, v(i)) : 0.0;
  }
  return y;
}

/// Exclusive norm sum_G (sum_{j in G} |x_j|)^p; only p = 2 is supported.
inline double exclusive_norm(const Signal& x, const Groups& groups, int p = 2) {
  if (p != 2) throw CapabilityError("exclusive_norm: only p = 2 is supported");
  double v = 0.0;
  for (const auto& g : groups) {
    double s = 0.0;
    for (Index i : g) s += std::abs(x(i));
    v += s * s;
  }
  return v;
}

/// Sliding windows {i, ..., i + delta - 1}: the rows of the refractory
/// constraint matrix.
inline Groups sliding_window_groups(Index n, Index delta) {
  if (delta < 1 || delta > n) throw InvalidParameter("sliding_window_groups: need 1 <= delta <= n");
  Groups g;
  for (Index i = 0; i + delta <= n; ++i) {
    std::vector<Index> w(static_cast<std::size_t>(delta));
    std::iota(w.begin(), w.end(), i);
    g.push_back(std::move(w));
  }
  return g;
}

/// Weighted anisotropic total variation over the edges of a graph.
inline double tv_value(const Signal& x, const submodular::CutFunction& graph) {
  double v = 0.0;
  for (const auto& e : graph.edges()) v += e.weight * std::abs(x(e.u) - x(e.v));
  return v;
}

/// Edge-difference operator: row e gives w_e (x_u - x_v), so that
/// ||D x||_1 = tv_value(x, graph).
inline LinearOperator difference_operator(const submodular::CutFunction& graph) {
  const auto edges = graph.edges();
  const Index n = graph.size();
  return make_custom(
      static_cast<Index>(edges.size()), n,
      [edges](const Signal& x) {
        Signal y(static_cast<Index>(edges.size()));
        for (std::size_t e = 0; e < edges.size(); ++e)
          y(static_cast<Index>(e)) = edges[e].weight * (x(edges[e].u) - x(edges[e].v));
        return y;
      },
      [edges, n](const Signal& y) {
        Signal x = Signal::Zero(n);
        for (std::size_t e = 0; e < edges.size(); ++e) {
          const double t = edges[e].weight * y(static_cast<Index>(e));
          x(edges[e].u) += t;
          x(edges[e].v) -= t;
        }
        return x;
      });
}

/// Exact prox of lambda sum_i |y_{i+1} - y_i| (1-D total variation), by
/// Condat's direct taut-string scan.
inline Signal tv1d_prox(const Signal& x, double lambda) {
  if (lambda < 0.0) throw InvalidParameter("tv1d_prox: lambda must be >= 0");
  const Index width = x.size();
  if (lambda == 0.0 || width < 2) return x;
  Signal out(width);
  const double* in = x.data();
  double* o = out.data();
  Index k = 0, k0 = 0, kplus = 0, kminus = 0;
  double umin = lambda, umax = -lambda;
  double vmin = in[0] - lambda, vmax = in[0] + lambda;
  const double twolambda = 2.0 * lambda;
  const double minlambda = -lambda;
  for (;;) {
    while (k == width - 1) {
      if (umin < 0.0) {
        do o[k0++] = vmin; while (k0 <= kminus);
        k = kminus = k0;
        vmin = in[k];
        umin = lambda;
        umax = vmin + umin - vmax;
      } else if (umax > 0.0) {
        do o[k0++] = vmax; while (k0 <= kplus);
        k = kplus = k0;
        vmax = in[k];
        umax = minlambda;
        umin = vmax + umax - vmin;
      } else {
        vmin += umin / static_cast<double>(k - k0 + 1);
        do o[k0++] = vmin; while (k0 <= k);
        return out;
      }
    }
    if ((umin += in[k + 1] - vmin) < minlambda) {
      do o[k0++] = vmin; while (k0 <= kminus);
      k = kplus = kminus = k0;
      vmin = in[k];
      vmax = vmin + twolambda;
      umin = lambda;
      umax = minlambda;
    } else if ((umax += in[k + 1] - vmax) > lambda) {
      do o[k0++] = vmax; while (k0 <= kplus);
      k = kplus = kminus = k0;
      vmax = in[k];
      vmin = vmax - twolambda;
      umin = lambda;
      umax = minlambda;
    } else {
      ++k;
      if (umin >= lambda) {
        kminus = k;
        vmin += (umin - lambda) / static_cast<double>(kminus - k0 + 1);
        umin = lambda;
      }
      if (umax <= minlambda) {
        kplus = k;
        vmax += (umax + lambda) / static_cast<double>(kplus - k0 + 1);
        umax = minlambda;
      }
    }
  }
}

}  // namespace structsparse::prox
