#pragma once

#include <cmath>
#include <functional>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/linear_operator.hpp"
#include "structsparse/solvers/common.hpp"

namespace structsparse::solvers {

/// min smooth(x) + lambda * penalty(x); prox(v, t) evaluates prox_{t penalty}(v).
struct CompositeProblem {
  std::function<double(const Signal&)> smooth;
  std::function<Signal(const Signal&)> gradient;
  std::function<double(const Signal&)> penalty;
  std::function<Signal(const Signal&, double)> prox;
};

/// Fills smooth/gradient with 0.5 ||u - A x||^2.
inline CompositeProblem least_squares_problem(const LinearOperator& A, const Signal& u) {
  CompositeProblem p;
  p.smooth = [A, u](const Signal& x) { return 0.5 * (u - A.apply(x)).squaredNorm(); };
  p.gradient = [A, u](const Signal& x) { return A.adjoint(A.apply(x) - u); };
  return p;
}

/// Accelerated proximal gradient with step 1/L. With cfg.restart the momentum
/// is reset whenever the objective would increase, which makes the objective
/// sequence non-increasing. cfg.accelerate = false gives ISTA.
inline SolveResult fista(const CompositeProblem& prob, double L, double lambda, const SolverConfig& cfg,
                         const Signal& x0) {
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidParameter("fista: L must be positive");
  if (lambda < 0.0) throw InvalidParameter("fista: lambda must be non-negative");
  const auto F = [&](const Signal& x) { return prob.smooth(x) + lambda * prob.penalty(x); };
  const auto step = [&](const Signal& y) { return prob.prox(y - prob.gradient(y) / L, lambda / L); };
  SolveResult res;
  Signal x = x0;
  Signal y = x0;
  double t = 1.0;
  double fx = F(x);
  for (res.iterations = 1; res.iterations <= cfg.max_iters; ++res.iterations) {
    Signal next = step(y);
    double fn = F(next);
    if (cfg.accelerate && cfg.restart && fn > fx) {
      t = 1.0;
      next = step(x);
      fn = F(next);
    }
    const double change = (next - x).norm();
    if (cfg.accelerate) {
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = next + ((t - 1.0) / tn) * (next - x);
      t = tn;
    } else {
      y = next;
    }
    x = std::move(next);
    fx = fn;
    if (cfg.record_trace) res.trace.push_back(fx);
    if (change == 0.0 || change < cfg.tol * x.norm()) {
      res.converged = true;
      break;
    }
  }
  res.iterations = std::min(res.iterations, cfg.max_iters);
  res.objective = fx;
  res.estimate = std::move(x);
  return res;
}

}  // namespace structsparse::solvers
