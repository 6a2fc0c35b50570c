#pragma once

#include <functional>
#include <vector>

#include "structsparse/core/signal.hpp"

namespace structsparse::solvers {

struct SolverConfig {
  int max_iters = 500;
  /// Gradient step; 0 selects 1/L with L = lipschitz_estimate(A).
  double step = 0.0;
  /// Projected-gradient step rule: the fixed step above, or the normalized
  /// step ||g_S||^2 / ||A g_S||^2 on the current support with backtracking.
  bool normalized_step = false;
  /// Refit every projected iterate by least squares on its support.
  bool debias = false;
  /// Relative tolerance used by every stopping rule.
  double tol = 1e-6;
  /// Primal-dual steps; 0 selects 0.99 / ||K|| for both.
  double primal_step = 0.0;
  double dual_step = 0.0;
  /// FISTA momentum and function-value restart.
  bool accelerate = true;
  bool restart = true;
  /// ADMM penalty and residual balancing (rho scaled by 2 when one residual
  /// exceeds the other tenfold).
  double rho = 1.0;
  bool balance_rho = true;
  bool record_trace = false;
};

struct SolveResult {
  Signal estimate;
  int iterations = 0;
  double objective = 0.0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> trace;
  /// Latent copies (ADMM with duplication only; empty otherwise).
  Signal latent;
  /// Set when a singular least-squares subproblem needed ridge regularization.
  bool ridge_fallback = false;
};

/// Model projection at a given budget (k for the model, 2k for proxies).
using Projector = std::function<Signal(const Signal&, Index budget)>;

}  // namespace structsparse::solvers
