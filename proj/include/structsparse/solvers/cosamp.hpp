#pragma once

#include <algorithm>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/linear_operator.hpp"
#include "structsparse/solvers/common.hpp"
#include "structsparse/solvers/least_squares.hpp"

namespace structsparse::solvers {

/// Model-based CoSaMP: identify a 2k-model support of the proxy A^T r, merge
/// it with the current support, solve least squares on the merged set and
/// prune back to the k-model by projection.
inline SolveResult model_cosamp(const LinearOperator& A, const Signal& u, const Projector& project, Index k,
                                const SolverConfig& cfg) {
  if (A.rows() != u.size()) throw InvalidParameter("model_cosamp: dimension mismatch");
  if (k < 1) throw InvalidParameter("model_cosamp: need k >= 1");
  const Index n = A.cols();
  SolveResult res;
  Signal x = Signal::Zero(n);
  Signal r = u;
  const double unorm = u.norm();
  if (unorm == 0.0) {
    res.estimate = x;
    res.converged = true;
    return res;
  }
  for (res.iterations = 1; res.iterations <= cfg.max_iters; ++res.iterations) {
    const Signal proxy = project(A.adjoint(r), std::min<Index>(2 * k, n));
    std::vector<Index> merged;
    for (Index i = 0; i < n; ++i)
      if (proxy(i) != 0.0 || x(i) != 0.0) merged.push_back(i);
    Signal next = Signal::Zero(n);
    if (!merged.empty()) {
      const Signal b = detail::restricted_least_squares(A, u, merged, res.ridge_fallback);
      Signal full = Signal::Zero(n);
      for (std::size_t t = 0; t < merged.size(); ++t) full(merged[t]) = b(static_cast<Index>(t));
      next = project(full, k);
    }
    r = u - A.apply(next);
    res.objective = 0.5 * r.squaredNorm();
    if (cfg.record_trace) res.trace.push_back(res.objective);
    const double change = (next - x).norm();
    x = std::move(next);
    if (r.norm() <= cfg.tol * unorm || change <= cfg.tol * x.norm()) {
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
