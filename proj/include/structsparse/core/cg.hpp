#pragma once

#include <cmath>
#include <functional>

#include "structsparse/core/signal.hpp"

namespace structsparse {

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Conjugate gradients for a symmetric positive (semi)definite operator given
/// as a mat-vec. `x` holds the warm start on entry and the solution on exit.
inline CgResult conjugate_gradient(const std::function<Signal(const Signal&)>& matvec,
                                   const Signal& rhs, Signal& x, double tol = 1e-10,
                                   int max_iters = 1000) {
  CgResult res;
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    x.setZero();
    res.converged = true;
    return res;
  }
  Signal r = rhs - matvec(x);
  Signal p = r;
  double rr = r.squaredNorm();
  for (; res.iterations < max_iters; ++res.iterations) {
    if (std::sqrt(rr) <= tol * bnorm) break;
    const Signal Ap = matvec(p);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) break;  // singular direction
    const double alpha = rr / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  res.relative_residual = std::sqrt(rr) / bnorm;
  res.converged = res.relative_residual <= tol;
  return res;
}

}  // namespace structsparse
