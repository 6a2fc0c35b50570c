#pragma once

#include <cmath>

#include "structsparse/core/errors.hpp"
#include "structsparse/submodular/set_function.hpp"
#include "structsparse/submodular/sfm.hpp"

namespace structsparse::submodular {

enum class LovaszProxMode {
  automatic,  // norm form for functions known to be monotone, extension otherwise
  extension,  // prox of lambda * r(y)
  norm,       // prox of lambda * r(|y|); R must be non-decreasing
};

namespace detail {

// argmin_y 1/2||y - x||^2 + lambda r(y) = x - Proj_{lambda B(R)}(x). With
// w the min-norm point of B(lambda R - x) = lambda B(R) - x, this is -w.
inline Signal prox_extension(const SetFunction& R, const Signal& x, double lambda, int max_iters) {
  const SetFunction shifted = lambda * R + SetFunction::modular(-x);
  MinNormOptions opt;
  opt.point_only = true;
  opt.wolfe_eps = 1e-15;
  opt.max_iters = max_iters;
  try {
    const MinNormResult res = min_norm_point(shifted, opt);
    return -res.point;
  } catch (const ConvergenceError& e) {
    throw ConvergenceError("prox_lovasz: min-norm point did not converge",
                           Signal(-e.best_iterate()), e.best_value());
  }
}

}  // namespace detail

/// Proximal operator of the Lovasz extension through a base-polytope
/// projection. For non-decreasing R the `norm` mode computes the prox of
/// r(|y|) by solving on |x| and clamping negative coordinates to zero before
/// restoring signs; for symmetric R (cuts) only the extension is meaningful.
inline Signal prox_lovasz(const SetFunction& R, const Signal& x, double lambda,
                          LovaszProxMode mode = LovaszProxMode::automatic, int max_iters = 10000) {
  if (x.size() != R.size()) throw InvalidParameter("prox_lovasz: length mismatch");
  if (!(lambda > 0.0)) throw InvalidParameter("prox_lovasz: lambda must be positive");
  const bool norm = mode == LovaszProxMode::norm || (mode == LovaszProxMode::automatic && R.known_monotone());
  if (!norm) return detail::prox_extension(R, x, lambda, max_iters);

  const Signal magnitude = x.cwiseAbs();
  const Signal z = detail::prox_extension(R, magnitude, lambda, max_iters).cwiseMax(0.0);
  Signal y(x.size());
  for (Index i = 0; i < x.size(); ++i) y(i) = x(i) < 0.0 ? -z(i) : z(i);
  return y;
}

}  // namespace structsparse::submodular
