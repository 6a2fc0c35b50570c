#pragma once

#include <cmath>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/linear_operator.hpp"
#include "structsparse/solvers/common.hpp"
#include "structsparse/solvers/least_squares.hpp"

namespace structsparse::solvers {

namespace detail {

// One normalized IHT step: exact line search along the gradient restricted to
// the current support, halved while a support change breaks the step bound.
inline Signal normalized_step(const LinearOperator& A, const Projector& project, Index k, const Signal& x,
                              const Signal& g) {
  const bool start = (x.array() == 0.0).all();
  const Signal active = start ? project(g, k) : x;
  Signal gs = Signal::Zero(g.size());
  for (Index i = 0; i < g.size(); ++i)
    if (active(i) != 0.0) gs(i) = g(i);
  const double den = A.apply(gs).squaredNorm();
  if (den == 0.0) return project(x + g, k);
  double mu = gs.squaredNorm() / den;
  Signal next;
  for (int tries = 0; tries < 60; ++tries) {
    next = project(x + mu * g, k);
    bool same = true;
    for (Index i = 0; i < x.size() && same; ++i) same = (next(i) != 0.0) == (x(i) != 0.0);
    if (same) break;
    const Signal d = next - x;
    const double ad = A.apply(d).squaredNorm();
    if (ad == 0.0 || mu <= 0.99 * d.squaredNorm() / ad) break;
    mu /= 2.0 * 0.99;
  }
  return next;
}

}  // namespace detail

/// Projected gradient (iterative hard thresholding) onto a structured model:
/// x <- P(x + mu A^T (u - A x)), mu = 1/L by default.
inline SolveResult iht(const LinearOperator& A, const Signal& u, const Projector& project, Index k,
                       const SolverConfig& cfg, const Signal& x0) {
  if (A.rows() != u.size() || A.cols() != x0.size()) throw InvalidParameter("iht: dimension mismatch");
  double mu = cfg.step;
  if (mu <= 0.0 && !cfg.normalized_step) {
    const double L = lipschitz_estimate(A, 100);
    mu = L > 0.0 ? 1.0 / L : 1.0;
  }
  SolveResult res;
  Signal x = x0;
  Signal r = u - A.apply(x);
  const double initial = 0.5 * r.squaredNorm();
  const double guard = 1e6 * std::max(initial, 1e-300);
  for (res.iterations = 1; res.iterations <= cfg.max_iters; ++res.iterations) {
    const Signal g = A.adjoint(r);
    Signal next;
    if (cfg.normalized_step) {
      next = detail::normalized_step(A, project, k, x, g);
    } else {
      next = project(x + mu * g, k);
    }
    if (cfg.debias) {
      std::vector<Index> cols;
      for (Index i = 0; i < next.size(); ++i)
        if (next(i) != 0.0) cols.push_back(i);
      if (!cols.empty()) {
        const Signal b = detail::restricted_least_squares(A, u, cols, res.ridge_fallback);
        next.setZero();
        for (std::size_t t = 0; t < cols.size(); ++t) next(cols[t]) = b(static_cast<Index>(t));
      }
    }
    r = u - A.apply(next);
    res.objective = 0.5 * r.squaredNorm();
    if (cfg.record_trace) res.trace.push_back(res.objective);
    if (res.objective > guard) throw ConvergenceError("iht: objective diverged", x, res.objective);
    const double change = (next - x).norm();
    x = std::move(next);
    if (change == 0.0 || change < cfg.tol * x.norm()) {
      res.converged = true;
      break;
    }
  }
  res.iterations = std::min(res.iterations, cfg.max_iters);
  res.residual = r.norm();
  res.estimate = std::move(x);
  return res;
}

}  // namespace structsparse::solvers
