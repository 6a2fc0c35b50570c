#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/linear_operator.hpp"
#include "structsparse/solvers/common.hpp"

namespace structsparse::solvers {

/// h(D x) term, accessed through the prox of its conjugate.
struct AnalysisTerm {
  LinearOperator D;
  std::function<Signal(const Signal&, double)> prox_conj;  // prox_{sigma h*}(z)
  std::function<double(const Signal&)> value;              // h(D x) given D x
};

/// lambda ||D x||_1: the conjugate prox is a clamp to [-lambda, lambda].
inline AnalysisTerm l1_analysis(const LinearOperator& D, double lambda) {
  return {D,
          [lambda](const Signal& z, double) { return Signal(z.cwiseMax(-lambda).cwiseMin(lambda)); },
          [lambda](const Signal& v) { return lambda * v.lpNorm<1>(); }};
}

/// Generic h given prox_{t h}, via the Moreau identity.
inline AnalysisTerm analysis_from_prox(const LinearOperator& D, std::function<Signal(const Signal&, double)> prox_h,
                                       std::function<double(const Signal&)> value) {
  return {D,
          [prox_h](const Signal& z, double sigma) { return Signal(z - sigma * prox_h(z / sigma, 1.0 / sigma)); },
          std::move(value)};
}

/// min g(x) + h(D x) subject to ||A x - u|| <= radius (radius 0: A x = u).
struct PrimalDualProblem {
  LinearOperator A;
  Signal u;
  double radius = 0.0;
  std::function<Signal(const Signal&, double)> prox_g;  // empty: g = 0
  std::function<double(const Signal&)> g_value;
  std::optional<AnalysisTerm> analysis;
};

namespace detail {

inline LinearOperator stacked(const LinearOperator& A, const LinearOperator& D) {
  const Index ma = A.rows();
  return make_custom(
      A.rows() + D.rows(), A.cols(),
      [A, D, ma](const Signal& x) {
        Signal y(A.rows() + D.rows());
        y.head(ma) = A.apply(x);
        y.tail(D.rows()) = D.apply(x);
        return y;
      },
      [A, D, ma](const Signal& y) { return Signal(A.adjoint(y.head(ma)) + D.adjoint(y.tail(D.rows()))); });
}

// prox_{sigma f*}(p) where f is the indicator of the ball ||v - u|| <= r.
inline Signal ball_conj_prox(const Signal& p, const Signal& u, double r, double sigma) {
  if (r <= 0.0) return p - sigma * u;
  Signal q = p / sigma - u;
  const double nq = q.norm();
  if (nq > r) q *= r / nq;
  return p - sigma * (u + q);
}

}  // namespace detail

/// Chambolle-Pock primal-dual iterations. Default steps are 0.99 / ||K|| with
/// K = [A; D]; explicit steps must satisfy sigma * tau * ||K||^2 <= 1.
inline SolveResult chambolle_pock(const PrimalDualProblem& prob, const SolverConfig& cfg,
                                  const std::optional<Signal>& x0 = std::nullopt) {
  const LinearOperator& A = prob.A;
  if (A.rows() != prob.u.size()) throw InvalidParameter("chambolle_pock: dimension mismatch");
  if (prob.radius < 0.0) throw InvalidParameter("chambolle_pock: negative radius");
  if (prob.analysis && prob.analysis->D.cols() != A.cols())
    throw InvalidParameter("chambolle_pock: analysis operator dimension mismatch");
  const double norm_sq = lipschitz_estimate(prob.analysis ? detail::stacked(A, prob.analysis->D) : A, 200);
  double tau = cfg.primal_step;
  double sigma = cfg.dual_step;
  if (tau <= 0.0 || sigma <= 0.0) {
    tau = sigma = 0.99 / std::sqrt(std::max(norm_sq, 1e-300));
  } else if (sigma * tau * norm_sq > 1.0 + 1e-12) {
    throw InvalidParameter("chambolle_pock: step sizes violate sigma * tau * ||K||^2 <= 1");
  }

  SolveResult res;
  Signal x = x0 ? *x0 : Signal::Zero(A.cols());
  Signal Ax = A.apply(x);
  Signal Ax_bar = Ax;
  Signal x_bar = x;
  Signal y = Signal::Zero(A.rows());
  Signal w;
  if (prob.analysis) w = Signal::Zero(prob.analysis->D.rows());
  const double unorm = prob.u.norm();
  const double feas_scale = unorm > 0.0 ? unorm : 1.0;

  const auto objective = [&](const Signal& v) {
    double f = prob.g_value ? prob.g_value(v) : 0.0;
    if (prob.analysis && prob.analysis->value) f += prob.analysis->value(prob.analysis->D.apply(v));
    return f;
  };

  for (res.iterations = 1; res.iterations <= cfg.max_iters; ++res.iterations) {
    y = detail::ball_conj_prox(y + sigma * Ax_bar, prob.u, prob.radius, sigma);
    Signal grad = A.adjoint(y);
    if (prob.analysis) {
      w = prob.analysis->prox_conj(w + sigma * prob.analysis->D.apply(x_bar), sigma);
      grad += prob.analysis->D.adjoint(w);
    }
    Signal v = x - tau * grad;
    Signal next = prob.prox_g ? prob.prox_g(v, tau) : v;
    Signal A_next = A.apply(next);
    x_bar = 2.0 * next - x;
    Ax_bar = 2.0 * A_next - Ax;
    const double change = (next - x).norm();
    x = std::move(next);
    Ax = std::move(A_next);
    const double feas = std::max((Ax - prob.u).norm() - prob.radius, 0.0);
    if (cfg.record_trace) res.trace.push_back(objective(x));
    if (feas < cfg.tol * feas_scale && (change == 0.0 || change < cfg.tol * x.norm())) {
      res.converged = true;
      break;
    }
  }
  res.iterations = std::min(res.iterations, cfg.max_iters);
  res.residual = (Ax - prob.u).norm();
  res.objective = objective(x);
  res.estimate = std::move(x);
  return res;
}

/// Convenience form: min g(x) subject to A x = u.
inline SolveResult chambolle_pock(const LinearOperator& A, const Signal& u,
                                  std::function<Signal(const Signal&, double)> prox_g, const SolverConfig& cfg) {
  PrimalDualProblem p{A, u, 0.0, std::move(prox_g), {}, std::nullopt};
  return chambolle_pock(p, cfg);
}

}  // namespace structsparse::solvers
