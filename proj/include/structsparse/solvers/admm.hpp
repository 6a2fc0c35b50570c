#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "structsparse/core/cg.hpp"
#include "structsparse/core/errors.hpp"
#include "structsparse/core/linear_operator.hpp"
#include "structsparse/prox/latent.hpp"
#include "structsparse/prox/norms.hpp"
#include "structsparse/solvers/common.hpp"

namespace structsparse::solvers {

enum class BlockPenalty {
  group_l2,    // sum_G w_G ||z_G||_2
  squared_l1,  // sum_G w_G ||z_G||_1^2
};

enum class Coupling {
  latent_sum,  // x = sum_G v^G, penalty on the latent blocks
  replicate,   // every block is a copy of x_G
};

namespace detail {

inline Signal block_prox(const Signal& z, const prox::DuplicationMap& map, double t, BlockPenalty pen) {
  Signal out = z;
  for (std::size_t g = 0; g < map.group_count(); ++g) {
    const auto& blk = map.block(g);
    const double tg = t * map.weights()[g];
    if (pen == BlockPenalty::group_l2) {
      prox::shrink_block(out, blk, tg);
    } else {
      Signal v(static_cast<Index>(blk.size()));
      for (std::size_t i = 0; i < blk.size(); ++i) v(static_cast<Index>(i)) = z(blk[i]);
      v = prox::prox_sq_l1(v, tg);
      for (std::size_t i = 0; i < blk.size(); ++i) out(blk[i]) = v(static_cast<Index>(i));
    }
  }
  return out;
}

inline double block_penalty(const Signal& z, const prox::DuplicationMap& map, BlockPenalty pen) {
  double total = 0.0;
  for (std::size_t g = 0; g < map.group_count(); ++g) {
    double s = 0.0;
    for (Index j : map.block(g)) s += pen == BlockPenalty::group_l2 ? z(j) * z(j) : std::abs(z(j));
    total += map.weights()[g] * (pen == BlockPenalty::group_l2 ? std::sqrt(s) : s * s);
  }
  return total;
}

}  // namespace detail

/// ADMM for 0.5 ||u - A x||^2 + lambda * penalty on a duplicated variable.
/// residual reports the final primal residual of the splitting.
inline SolveResult admm_duplication(const LinearOperator& A, const Signal& u, const prox::DuplicationMap& map,
                                    double lambda, const SolverConfig& cfg,
                                    BlockPenalty pen = BlockPenalty::group_l2,
                                    Coupling coupling = Coupling::latent_sum) {
  if (A.rows() != u.size() || A.cols() != map.ambient()) throw InvalidParameter("admm: dimension mismatch");
  if (lambda < 0.0) throw InvalidParameter("admm: lambda must be non-negative");
  if (!(cfg.rho > 0.0)) throw InvalidParameter("admm: rho must be positive");
  const Index n = map.ambient();
  const Index nl = map.latent_size();
  const Signal counts = map.multiplicity();
  if (coupling == Coupling::replicate && (counts.array() == 0.0).any() && A.rows() < n)
    throw InvalidParameter("admm: replicate coupling needs every index covered");

  double rho = cfg.rho;
  // Small operators: factor the linear system once per rho value.
  const bool dense = n <= 4096 && A.rows() <= 4096;
  Eigen::MatrixXd Ad;
  Eigen::LDLT<Eigen::MatrixXd> chol;
  double factored_rho = 0.0;
  if (dense) Ad = A.to_dense();
  const auto factor = [&](double r) {
    if (coupling == Coupling::latent_sum) {
      Eigen::MatrixXd S = Ad * counts.asDiagonal() * Ad.transpose();
      S.diagonal().array() += r;
      chol.compute(S);
    } else {
      Eigen::MatrixXd S = Ad.transpose() * Ad;
      S.diagonal() += r * counts;
      chol.compute(S);
    }
  };
  SolveResult res;
  Signal z = Signal::Zero(nl);
  Signal y = Signal::Zero(nl);  // scaled dual
  Signal x = Signal::Zero(n);   // replicate: primal x; latent_sum: latent w lives in `w`
  Signal w = Signal::Zero(nl);
  const Signal Atu = A.adjoint(u);
  double r_norm = 0.0;

  for (res.iterations = 1; res.iterations <= cfg.max_iters; ++res.iterations) {
    Signal coupled;
    if (dense && factored_rho != rho) {
      factor(rho);
      factored_rho = rho;
    }
    if (coupling == Coupling::latent_sum) {
      const Signal rhs = map.expand(Atu) + rho * (z - y);
      if (dense) {
        // Woodbury: (rho I + C^T C)^{-1} with C = A B, through the m x m system.
        const Signal Cr = Ad * map.collapse(rhs);
        w = (rhs - map.expand(Ad.transpose() * Signal(chol.solve(Cr)))) / rho;
      } else {
        conjugate_gradient(
            [&](const Signal& v) { return Signal(map.expand(A.adjoint(A.apply(map.collapse(v)))) + rho * v); }, rhs,
            w, 1e-10, 1000);
      }
      coupled = w;
    } else {
      const Signal rhs = Atu + rho * map.collapse(z - y);
      if (dense) {
        x = chol.solve(rhs);
      } else {
        conjugate_gradient(
            [&](const Signal& v) { return Signal(A.adjoint(A.apply(v)) + rho * counts.cwiseProduct(v)); }, rhs, x,
            1e-10, 1000);
      }
      coupled = map.expand(x);
    }
    const Signal z_old = z;
    z = detail::block_prox(coupled + y, map, lambda / rho, pen);
    y += coupled - z;
    r_norm = (coupled - z).norm();
    const double s_norm = rho * (z - z_old).norm();
    const double eps_pri = cfg.tol * std::max({coupled.norm(), z.norm(), 1e-12});
    const double eps_dual = cfg.tol * std::max(rho * y.norm(), 1e-12);
    if (cfg.record_trace) {
      const Signal xe = map.collapse(z);
      const Signal est = coupling == Coupling::latent_sum ? xe : x;
      res.trace.push_back(0.5 * (u - A.apply(est)).squaredNorm() + lambda * detail::block_penalty(z, map, pen));
    }
    if (r_norm <= eps_pri && s_norm <= eps_dual) {
      res.converged = true;
      break;
    }
    if (cfg.balance_rho) {
      if (r_norm > 10.0 * s_norm && rho < 1e6 * cfg.rho) {
        rho *= 2.0;
        y /= 2.0;
      } else if (s_norm > 10.0 * r_norm && rho > 1e-6 * cfg.rho) {
        rho /= 2.0;
        y *= 2.0;
      }
    }
  }
  res.iterations = std::min(res.iterations, cfg.max_iters);
  if (coupling == Coupling::latent_sum) {
    res.estimate = map.collapse(z);
  } else {
    // Zero the indices whose copies were all thresholded away.
    res.estimate = x;
    std::vector<bool> alive(static_cast<std::size_t>(n), false);
    for (Index j = 0; j < nl; ++j)
      if (z(j) != 0.0) alive[static_cast<std::size_t>(map.source(j))] = true;
    for (Index i = 0; i < n; ++i)
      if (counts(i) > 0.0 && !alive[static_cast<std::size_t>(i)]) res.estimate(i) = 0.0;
  }
  res.residual = r_norm;
  res.latent = z;
  res.objective = 0.5 * (u - A.apply(res.estimate)).squaredNorm() + lambda * detail::block_penalty(z, map, pen);
  return res;
}

}  // namespace structsparse::solvers
