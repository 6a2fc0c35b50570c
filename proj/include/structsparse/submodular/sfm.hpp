#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "structsparse/core/errors.hpp"
#include "structsparse/submodular/lovasz.hpp"
#include "structsparse/submodular/maxflow.hpp"
#include "structsparse/submodular/set_function.hpp"

namespace structsparse::submodular {

struct SfmResult {
  Support minimizer;
  double value = 0.0;
};

/// Enumerates all 2^n subsets. Among minimizers returns the smallest one,
/// ties between equal sizes going to the lexicographically smallest; for a
/// submodular R that is the unique inclusion-minimal minimizer.
inline SfmResult sfm_bruteforce(const SetFunction& R) {
  const Index n = R.size();
  if (n > 20) throw CapabilityError("sfm_bruteforce: limited to n <= 20");
  const std::uint32_t count = std::uint32_t{1} << n;
  // Visit subsets by size, then lexicographically, so the first strict
  // improvement wins every tie.
  std::vector<std::uint32_t> masks(count);
  for (std::uint32_t m = 0; m < count; ++m) masks[m] = m;
  auto lex_key = [n](std::uint32_t m) {
    // Bit-reversed mask: comparing reversed masks descending orders equal-size
    // sets lexicographically by their sorted members.
    std::uint32_t r = 0;
    for (Index i = 0; i < n; ++i)
      if (m >> i & 1u) r |= 1u << (n - 1 - i);
    return r;
  };
  std::stable_sort(masks.begin(), masks.end(), [&](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    return lex_key(a) > lex_key(b);
  });
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t arg = 0;
  Subset s(static_cast<std::size_t>(n));
  for (std::uint32_t m : masks) {
    for (Index i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = (m >> i) & 1u;
    const double v = R(s);
    if (v < best) {
      best = v;
      arg = m;
    }
  }
  std::vector<Index> idx;
  for (Index i = 0; i < n; ++i)
    if (arg >> i & 1u) idx.push_back(i);
  return {Support(n, std::move(idx)), best};
}

/// Minimizes cut(S) + sum_{i in S} w_i exactly via an s-t minimum cut:
/// source arcs carry -w_i for negative weights, sink arcs w_i for positive
/// ones, and every pairwise edge becomes a pair of opposite arcs. Returns the
/// inclusion-minimal minimizer (the residual source side).
inline SfmResult sfm_graphcut(const CutFunction& cut, const ModularFunction& modular) {
  const Index n = modular.weights.size();
  if (cut.size() != n) throw InvalidParameter("sfm_graphcut: size mismatch");
  const Index source = n, sink = n + 1;
  MaxFlow net(n + 2);
  for (Index i = 0; i < n; ++i) {
    const double w = modular.weights(i);
    if (w > 0.0) net.add_arc(i, sink, w);
    else if (w < 0.0) net.add_arc(source, i, -w);
  }
  for (const Edge& e : cut.edges()) net.add_arc(e.u, e.v, e.weight, e.weight);
  net.solve(source, sink);
  const auto side = net.source_side(source);
  std::vector<Index> idx;
  for (Index i = 0; i < n; ++i)
    if (side[static_cast<std::size_t>(i)]) idx.push_back(i);
  Support s(n, std::move(idx));
  const auto ind = s.indicator();
  return {s, cut(ind) + modular(ind)};
}

struct MinNormOptions {
  /// Stop once R(best level set) - sum_i min(x_i, 0) falls below this.
  double gap_tol = 1e-9;
  /// Stop once ||x||^2 - min_q <x, q> <= wolfe_eps * max ||p||^2 over the
  /// active vertices (x is then the min-norm point to working precision).
  double wolfe_eps = 1e-13;
  int max_iters = 10000;
  /// Use only the Wolfe criterion (needed when the point itself is wanted).
  bool point_only = false;
};

struct MinNormResult {
  Signal point;        // (approximate) minimum-norm point of B(R)
  Support minimizer;   // best level set {i : x_i below threshold}
  double value = 0.0;  // R(minimizer)
  double gap = 0.0;    // value - sum_i min(point_i, 0), a certificate
  int iterations = 0;
};

namespace detail {

// Minimizer of ||sum_i a_i p_i|| over the affine hull (sum a_i = 1).
inline Eigen::VectorXd affine_minimizer(const Eigen::MatrixXd& P) {
  const Index k = P.cols();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(k);
  alpha(0) = 1.0;
  if (k == 1) return alpha;
  // Parametrize by differences from the first point: p0 + D beta.
  const Eigen::MatrixXd D = P.rightCols(k - 1).colwise() - P.col(0);
  const Eigen::VectorXd beta = D.colPivHouseholderQr().solve(Eigen::VectorXd(-P.col(0)));
  alpha.tail(k - 1) = beta;
  alpha(0) = 1.0 - beta.sum();
  return alpha;
}

// Level sets along the increasing order of x; picks the lowest value, ties to
// the shorter prefix.
inline void best_level_set(const SetFunction& R, const Signal& x, const std::vector<Index>& order,
                           const Signal& q, MinNormResult& out) {
  double running = 0.0, best = 0.0;
  std::size_t best_len = 0;
  const double slack = 1e-12 * std::max(1.0, q.cwiseAbs().sum());
  for (std::size_t k = 0; k < order.size(); ++k) {
    running += q(order[k]);
    if (running < best - slack) {
      best = running;
      best_len = k + 1;
    }
  }
  std::vector<Index> idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_len));
  out.minimizer = Support(x.size(), std::move(idx));
  out.value = R(out.minimizer);
  out.gap = out.value - x.cwiseMin(0.0).sum();
}

}  // namespace detail

/// Fujishige-Wolfe minimum-norm-point algorithm on the base polytope B(R),
/// with the greedy (Edmonds) vertex as linear-minimization oracle. R should
/// be submodular; the result then contains the minimal minimizer read off
/// the sign pattern of the min-norm point.
inline MinNormResult min_norm_point(const SetFunction& R, const MinNormOptions& opt = {}) {
  const Index n = R.size();
  MinNormResult out;
  if (n == 0) {
    out.point = Signal(0);
    out.minimizer = Support(0);
    return out;
  }
  std::vector<Signal> pts;
  std::vector<double> lambda;
  pts.push_back(greedy_vertex(R, Signal::Zero(n)));
  lambda.push_back(1.0);
  Signal x = pts.front();

  for (out.iterations = 0; out.iterations < opt.max_iters; ++out.iterations) {
    std::vector<Index> order;
    const Signal q = greedy_vertex(R, x, &order);
    if (!opt.point_only) {
      detail::best_level_set(R, x, order, q, out);
      if (out.gap <= opt.gap_tol) break;
    }
    double scale = q.squaredNorm();
    for (const auto& p : pts) scale = std::max(scale, p.squaredNorm());
    if (x.squaredNorm() - x.dot(q) <= opt.wolfe_eps * scale) break;

    pts.push_back(q);
    lambda.push_back(0.0);
    // Minor cycles: move toward the affine minimizer until it lies inside
    // the convex hull of the active vertices.
    for (;;) {
      Eigen::MatrixXd P(n, static_cast<Index>(pts.size()));
      for (std::size_t i = 0; i < pts.size(); ++i) P.col(static_cast<Index>(i)) = pts[i];
      const Eigen::VectorXd alpha = detail::affine_minimizer(P);
      if ((alpha.array() > 1e-12).all()) {
        for (std::size_t i = 0; i < pts.size(); ++i) lambda[i] = alpha(static_cast<Index>(i));
        x = P * alpha;
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double a = alpha(static_cast<Index>(i));
        if (a <= 1e-12 && lambda[i] - a > 0.0) theta = std::min(theta, lambda[i] / (lambda[i] - a));
      }
      for (std::size_t i = 0; i < pts.size(); ++i)
        lambda[i] = (1.0 - theta) * lambda[i] + theta * alpha(static_cast<Index>(i));
      std::vector<Signal> keep_pts;
      std::vector<double> keep_lambda;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (lambda[i] > 1e-14) {
          keep_pts.push_back(std::move(pts[i]));
          keep_lambda.push_back(lambda[i]);
        }
      const double total = std::accumulate(keep_lambda.begin(), keep_lambda.end(), 0.0);
      for (double& l : keep_lambda) l /= total;
      pts = std::move(keep_pts);
      lambda = std::move(keep_lambda);
      x = Signal::Zero(n);
      for (std::size_t i = 0; i < pts.size(); ++i) x += lambda[i] * pts[i];
      if (pts.size() == 1) break;
    }
  }
  out.point = x;
  if (out.iterations >= opt.max_iters) {
    if (!opt.point_only) {
      std::vector<Index> order;
      const Signal q = greedy_vertex(R, x, &order);
      detail::best_level_set(R, x, order, q, out);
    }
    throw ConvergenceError("min_norm_point: iteration cap reached", x, out.value);
  }
  if (opt.point_only) {
    std::vector<Index> order;
    const Signal q = greedy_vertex(R, x, &order);
    detail::best_level_set(R, x, order, q, out);
  }
  return out;
}

/// Submodular minimization through the min-norm point; `tol` bounds the
/// certified optimality gap of the returned value.
inline MinNormResult sfm_minnorm(const SetFunction& R, double tol = 1e-9, int max_iters = 10000) {
  if (!(tol > 0.0)) throw InvalidParameter("sfm_minnorm: tol must be positive");
  MinNormOptions opt;
  opt.gap_tol = tol;
  opt.max_iters = max_iters;
  return min_norm_point(R, opt);
}

}  // namespace structsparse::submodular
