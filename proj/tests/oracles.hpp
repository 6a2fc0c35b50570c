#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. Everything here enumerates; nothing reuses library algorithms.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mask = std::uint32_t;
using Groups = std::vector<std::vector<std::ptrdiff_t>>;

inline bool bit(Mask m, std::ptrdiff_t i) { return (m >> i) & 1u; }

inline double masked_energy(const Vec& x, Mask m) {
  double v = 0.0;
  for (std::ptrdiff_t i = 0; i < x.size(); ++i)
    if (bit(m, i)) v += x(i) * x(i);
  return v;
}

inline double masked_sum(const Vec& c, Mask m) {
  double v = 0.0;
  for (std::ptrdiff_t i = 0; i < c.size(); ++i)
    if (bit(m, i)) v += c(i);
  return v;
}

// Best sum of x_i^2 over supports with at most k indices, consecutive gaps >= delta.
inline double dispersive_best(const Vec& x, int k, int delta) {
  const auto n = static_cast<int>(x.size());
  double best = 0.0;
  for (Mask m = 0; m < (Mask{1} << n); ++m) {
    if (std::popcount(m) > k) continue;
    int last = -1000000;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      if (bit(m, i)) {
        ok = i - last >= delta;
        last = i;
      }
    if (ok) best = std::max(best, masked_energy(x, m));
  }
  return best;
}

// Best sum of x_i^2 over rooted-connected supports of at most k nodes.
inline double rc_tree_best(const Vec& x, const std::vector<std::ptrdiff_t>& parent, int k) {
  const auto n = static_cast<int>(x.size());
  double best = 0.0;
  for (Mask m = 0; m < (Mask{1} << n); ++m) {
    if (std::popcount(m) > k) continue;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      if (bit(m, i) && parent[static_cast<std::size_t>(i)] >= 0) ok = bit(m, parent[static_cast<std::size_t>(i)]);
    if (ok) best = std::max(best, masked_energy(x, m));
  }
  return best;
}

inline Mask cover_mask(const Groups& groups, Mask selection) {
  Mask cov = 0;
  for (std::size_t g = 0; g < groups.size(); ++g)
    if (bit(selection, static_cast<std::ptrdiff_t>(g)))
      for (auto i : groups[g]) cov |= Mask{1} << i;
  return cov;
}

// Maximum covered weight using at most G groups.
inline double coverage_best(const Vec& c, const Groups& groups, int G) {
  double best = 0.0;
  for (Mask s = 0; s < (Mask{1} << groups.size()); ++s)
    if (std::popcount(s) <= G) best = std::max(best, masked_sum(c, cover_mask(groups, s)));
  return best;
}

// Maximum weight of at most K elements lying in the union of at most G groups.
inline double sparse_coverage_best(const Vec& c, const Groups& groups, int G, int K) {
  double best = 0.0;
  for (Mask s = 0; s < (Mask{1} << groups.size()); ++s) {
    if (std::popcount(s) > G) continue;
    const Mask cov = cover_mask(groups, s);
    for (Mask e = cov;; e = (e - 1) & cov) {
      if (std::popcount(e) <= K) best = std::max(best, masked_sum(c, e));
      if (e == 0) break;
    }
  }
  return best;
}

// Minimum over all subsets of a set function given as a mask oracle.
inline double set_min(int n, const std::function<double(Mask)>& f) {
  double best = std::numeric_limits<double>::infinity();
  for (Mask m = 0; m < (Mask{1} << n); ++m) best = std::min(best, f(m));
  return best;
}

struct WEdge {
  int u, v;
  double w;
};

inline double cut_value(const std::vector<WEdge>& edges, Mask m) {
  double v = 0.0;
  for (const auto& e : edges)
    if (bit(m, e.u) != bit(m, e.v)) v += e.w;
  return v;
}

inline double tv_sum(const std::vector<WEdge>& edges, const Vec& x) {
  double v = 0.0;
  for (const auto& e : edges) v += e.w * std::abs(x(e.u) - x(e.v));
  return v;
}

// Random loopless pairwise-overlapping group structure: the group graph is a
// random forest, each forest edge owns one or two shared elements and each
// group gets private elements. Returns the groups over n elements (n <= max_n),
// possibly leaving some elements uncovered.
template <class Rng>
Groups random_loopless(Rng& rng, int M, int max_n, int& n_out) {
  for (;;) {
    std::vector<std::vector<int>> groups(static_cast<std::size_t>(M));
    int next = 0;
    for (int g = 1; g < M; ++g) {
      if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) continue;
      const int p = std::uniform_int_distribution<int>(0, g - 1)(rng);
      const int shared = std::uniform_int_distribution<int>(1, 2)(rng);
      for (int s = 0; s < shared; ++s) {
        groups[static_cast<std::size_t>(g)].push_back(next);
        groups[static_cast<std::size_t>(p)].push_back(next);
        ++next;
      }
    }
    for (int g = 0; g < M; ++g) {
      const int own = std::uniform_int_distribution<int>(groups[static_cast<std::size_t>(g)].empty() ? 1 : 0, 2)(rng);
      for (int s = 0; s < own; ++s) groups[static_cast<std::size_t>(g)].push_back(next++);
    }
    const int spare = std::uniform_int_distribution<int>(0, 2)(rng);
    const int n = next + spare;
    if (n > max_n) continue;
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Groups out;
    for (const auto& g : groups) {
      std::vector<std::ptrdiff_t> h;
      for (int i : g) h.push_back(perm[static_cast<std::size_t>(i)]);
      out.push_back(std::move(h));
    }
    n_out = n;
    return out;
  }
}

// Random parent array: node i > 0 hangs under a random earlier node, or is a
// root with probability 1/5. Node 0 is always a root.
template <class Rng>
std::vector<std::ptrdiff_t> random_forest(Rng& rng, int n) {
  std::vector<std::ptrdiff_t> parent(static_cast<std::size_t>(n), -1);
  for (int i = 1; i < n; ++i)
    if (std::uniform_int_distribution<int>(0, 4)(rng) != 0)
      parent[static_cast<std::size_t>(i)] = std::uniform_int_distribution<int>(0, i - 1)(rng);
  return parent;
}

// Integer-valued vector so that sums are exact in floating point.
template <class Rng>
Vec random_integers(Rng& rng, int n, int lo, int hi) {
  Vec x(n);
  for (int i = 0; i < n; ++i) x(i) = std::uniform_int_distribution<int>(lo, hi)(rng);
  return x;
}

// Largest singular value squared of a dense matrix.
inline double spectral_norm_sq(const Eigen::MatrixXd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const double s = svd.singularValues()(0);
  return s * s;
}

// Minimizer of 1/2||y-x||^2 + lambda * TV(y) for a chain, by projected
// gradient on the dual box |z_e| <= lambda (y = x - D^T z).
inline Vec tv1d_dual(const Vec& x, double lambda, int iters = 200000) {
  const auto n = x.size();
  if (n < 2) return x;
  Vec z = Vec::Zero(n - 1);
  auto primal = [&](const Vec& zz) {
    Vec y = x;
    for (std::ptrdiff_t e = 0; e + 1 < n; ++e) {
      y(e) += zz(e);
      y(e + 1) -= zz(e);
    }
    return y;
  };
  for (int it = 0; it < iters; ++it) {
    const Vec y = primal(z);
    Vec next = z;
    for (std::ptrdiff_t e = 0; e + 1 < n; ++e) next(e) = std::clamp(z(e) - 0.25 * (y(e) - y(e + 1)), -lambda, lambda);
    if ((next - z).lpNorm<Eigen::Infinity>() < 1e-15) {
      z = next;
      break;
    }
    z = next;
  }
  return primal(z);
}

}  // namespace oracle
