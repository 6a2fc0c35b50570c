#pragma once

#include <cmath>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/linear_operator.hpp"
#include "structsparse/submodular/set_function.hpp"
#include "structsparse/submodular/sfm.hpp"

namespace structsparse::submodular {

struct MMConfig {
  double lambda = 1.0;  // weight of R(supp x)
  double tau = 0.0;     // weight of |supp x|
  int max_iters = 100;
  /// Lipschitz constant of grad f; 0 means lipschitz_estimate(A). Raised by
  /// backtracking whenever the quadratic bound fails at the new iterate.
  double lipschitz = 0.0;
  /// Relative objective change that counts as converged.
  double tol = 1e-10;
  /// Gap tolerance for the min-norm-point fallback.
  double sfm_tol = 1e-9;
};

struct MMResult {
  Signal estimate;
  std::vector<double> trace;  // objective at x0, x1, ...
  int iterations = 0;
  bool converged = false;
  double lipschitz = 0.0;
  Support support;            // SFM selection of the last step
};

namespace detail {

inline double mm_objective(const LinearOperator& A, const Signal& u, const SetFunction& R,
                           const MMConfig& cfg, const Signal& x) {
  const Support s = Support::of(x);
  const double fit = 0.5 * (u - A.apply(x)).squaredNorm();
  const double reg = cfg.lambda == 0.0 ? 0.0 : cfg.lambda * R(s);
  return fit + reg + cfg.tau * static_cast<double>(s.size());
}

// argmin_S  -L/2 sum_{j in S} z_j^2 + tau |S| + lambda R(S)
inline Support mm_select(const SetFunction& R, const MMConfig& cfg, const Signal& z, double L) {
  const Signal w = (-0.5 * L) * z.cwiseAbs2().array() + cfg.tau;
  const SetFunction F = cfg.lambda == 0.0 ? SetFunction::modular(w) : SetFunction::modular(w) + cfg.lambda * R;
  if (auto cm = F.as_cut_plus_modular()) return sfm_graphcut(cm->cut, cm->modular).minimizer;
  return sfm_minnorm(F, cfg.sfm_tol).minimizer;
}

}  // namespace detail

/// Majorization-minimization for  1/2||u - Ax||^2 + lambda R(supp x) + tau |supp x|.
/// Each step majorizes the data term by its quadratic upper bound at x^i,
/// which turns the support choice into minimizing the modular function
/// -L/2 (x^i - grad/L)_j^2 plus the regularizer; the new iterate is the
/// gradient step restricted to the chosen set. Cut-plus-modular problems are
/// solved by max-flow, anything else by the min-norm point.
inline MMResult mm_solve(const LinearOperator& A, const Signal& u, const SetFunction& R,
                         const MMConfig& cfg, const Signal& x0) {
  if (A.rows() != u.size() || A.cols() != x0.size() || R.size() != A.cols())
    throw InvalidParameter("mm_solve: dimension mismatch");
  if (cfg.lambda < 0.0 || cfg.tau < 0.0) throw InvalidParameter("mm_solve: lambda and tau must be >= 0");
  MMResult res;
  double L = cfg.lipschitz > 0.0 ? cfg.lipschitz : lipschitz_estimate(A, 200);
  if (!(L > 0.0)) L = 1.0;  // zero operator: any step is a majorizer

  Signal x = x0;
  double obj = detail::mm_objective(A, u, R, cfg, x);
  res.trace.push_back(obj);
  for (res.iterations = 0; res.iterations < cfg.max_iters;) {
    const Signal residual = A.apply(x) - u;
    const double fx = 0.5 * residual.squaredNorm();
    const Signal grad = A.adjoint(residual);
    Signal next;
    Support chosen;
    for (;;) {
      const Signal z = x - grad / L;
      chosen = detail::mm_select(R, cfg, z, L);
      next = restrict_to(z, chosen);
      const Signal d = next - x;
      const double bound = fx + grad.dot(d) + 0.5 * L * d.squaredNorm();
      const double fnext = 0.5 * (A.apply(next) - u).squaredNorm();
      if (fnext <= bound + 1e-12 * std::max(1.0, std::abs(bound))) break;
      L *= 2.0;
    }
    ++res.iterations;
    const double next_obj = detail::mm_objective(A, u, R, cfg, next);
    x = std::move(next);
    res.support = std::move(chosen);
    res.trace.push_back(next_obj);
    const double change = std::abs(obj - next_obj);
    obj = next_obj;
    if (change <= cfg.tol * std::max(1.0, std::abs(obj))) {
      res.converged = true;
      break;
    }
  }
  res.estimate = std::move(x);
  res.lipschitz = L;
  return res;
}

}  // namespace structsparse::submodular
