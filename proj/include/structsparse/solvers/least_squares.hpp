#pragma once

#include <algorithm>
#include <vector>

#include "structsparse/core/cg.hpp"
#include "structsparse/core/linear_operator.hpp"

namespace structsparse::solvers {

namespace detail {

// Least squares restricted to the columns `cols`, through CG on the normal
// equations. Falls back to a 1e-10 ridge when the system is singular.
inline Signal restricted_least_squares(const LinearOperator& A, const Signal& u,
                                       const std::vector<Index>& cols, bool& ridge) {
  const Eigen::MatrixXd As = A.columns(cols);
  const Eigen::MatrixXd gram = As.transpose() * As;
  const Signal rhs = As.transpose() * u;
  Signal b = Signal::Zero(static_cast<Index>(cols.size()));
  const bool underdetermined = static_cast<Index>(cols.size()) > A.rows();
  CgResult cg;
  if (!underdetermined) cg = conjugate_gradient([&](const Signal& v) { return Signal(gram * v); }, rhs, b, 1e-10, 3000);
  if (underdetermined || !cg.converged) {
    ridge = true;
    const double reg = 1e-10 * std::max(1.0, gram.diagonal().maxCoeff());
    b.setZero();
    conjugate_gradient([&](const Signal& v) { return Signal(gram * v + reg * v); }, rhs, b, 1e-10, 3000);
  }
  return b;
}

}  // namespace detail

}  // namespace structsparse::solvers
