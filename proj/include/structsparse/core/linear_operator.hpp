#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/haar.hpp"
#include "structsparse/core/random.hpp"
#include "structsparse/core/signal.hpp"

namespace structsparse {

enum class OperatorKind {
  dense_gaussian,
  dense,
  expander,
  haar2d,
  identity,
  diagonal,
  composition,
  custom,
};

inline std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::dense_gaussian: return "dense-gaussian";
    case OperatorKind::dense: return "dense";
    case OperatorKind::expander: return "expander";
    case OperatorKind::haar2d: return "haar2d";
    case OperatorKind::identity: return "identity";
    case OperatorKind::diagonal: return "diagonal";
    case OperatorKind::composition: return "composition";
    case OperatorKind::custom: return "custom";
  }
  return "unknown";
}

/// Immutable m x n forward/adjoint pair. Copies share the underlying
/// representation, so passing by value is cheap and thread-safe.
class LinearOperator {
 public:
  struct Impl {
    virtual ~Impl() = default;
    virtual Signal apply(const Signal& x) const = 0;
    virtual Signal adjoint(const Signal& y) const = 0;
  };

  LinearOperator(Index rows, Index cols, OperatorKind kind,
                 std::shared_ptr<const Impl> impl)
      : rows_(rows), cols_(cols), kind_(kind), impl_(std::move(impl)) {}

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  OperatorKind kind() const noexcept { return kind_; }

  Signal apply(const Signal& x) const {
    if (x.size() != cols_) throw InvalidParameter("LinearOperator::apply: dimension mismatch");
    return impl_->apply(x);
  }
  Signal adjoint(const Signal& y) const {
    if (y.size() != rows_) throw InvalidParameter("LinearOperator::adjoint: dimension mismatch");
    return impl_->adjoint(y);
  }
  Signal operator*(const Signal& x) const { return apply(x); }

  /// Materializes the operator column by column. Intended for small sizes.
  Eigen::MatrixXd to_dense() const {
    Eigen::MatrixXd M(rows_, cols_);
    Signal e = Signal::Zero(cols_);
    for (Index j = 0; j < cols_; ++j) {
      e(j) = 1.0;
      M.col(j) = apply(e);
      e(j) = 0.0;
    }
    return M;
  }

  /// Image of the columns listed in `cols`, as a dense rows() x |cols| block.
  Eigen::MatrixXd columns(const std::vector<Index>& cols) const {
    Eigen::MatrixXd M(rows_, static_cast<Index>(cols.size()));
    Signal e = Signal::Zero(cols_);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      e(cols[k]) = 1.0;
      M.col(static_cast<Index>(k)) = apply(e);
      e(cols[k]) = 0.0;
    }
    return M;
  }

  const Impl& impl() const noexcept { return *impl_; }

 private:
  Index rows_;
  Index cols_;
  OperatorKind kind_;
  std::shared_ptr<const Impl> impl_;
};

namespace detail {

struct DenseImpl final : LinearOperator::Impl {
  explicit DenseImpl(Eigen::MatrixXd m) : M(std::move(m)) {}
  Signal apply(const Signal& x) const override { return M * x; }
  Signal adjoint(const Signal& y) const override { return M.transpose() * y; }
  Eigen::MatrixXd M;
};

struct DiagonalImpl final : LinearOperator::Impl {
  explicit DiagonalImpl(Signal d) : diag(std::move(d)) {}
  Signal apply(const Signal& x) const override { return diag.cwiseProduct(x); }
  Signal adjoint(const Signal& y) const override { return diag.cwiseProduct(y); }
  Signal diag;
};

struct IdentityImpl final : LinearOperator::Impl {
  Signal apply(const Signal& x) const override { return x; }
  Signal adjoint(const Signal& y) const override { return y; }
};

// Binary matrix stored as the row positions of the ones in each column.
struct ExpanderImpl final : LinearOperator::Impl {
  ExpanderImpl(Index m, std::vector<std::vector<Index>> cols)
      : rows(m), ones(std::move(cols)) {}
  Signal apply(const Signal& x) const override {
    Signal y = Signal::Zero(rows);
    for (std::size_t j = 0; j < ones.size(); ++j) {
      const double xj = x(static_cast<Index>(j));
      if (xj == 0.0) continue;
      for (Index r : ones[j]) y(r) += xj;
    }
    return y;
  }
  Signal adjoint(const Signal& y) const override {
    Signal x(static_cast<Index>(ones.size()));
    for (std::size_t j = 0; j < ones.size(); ++j) {
      double s = 0.0;
      for (Index r : ones[j]) s += y(r);
      x(static_cast<Index>(j)) = s;
    }
    return x;
  }
  Index rows;
  std::vector<std::vector<Index>> ones;
};

// Synthesis W: coefficients -> image. Orthonormal, so W^T = W^{-1}.
struct HaarImpl final : LinearOperator::Impl {
  explicit HaarImpl(Index side) : p(side) {}
  Signal apply(const Signal& c) const override { return haar2d_inverse(c, p); }
  Signal adjoint(const Signal& x) const override { return haar2d_forward(x, p); }
  Index p;
};

struct CompositionImpl final : LinearOperator::Impl {
  CompositionImpl(LinearOperator outer, LinearOperator inner)
      : a(std::move(outer)), b(std::move(inner)) {}
  Signal apply(const Signal& x) const override { return a.apply(b.apply(x)); }
  Signal adjoint(const Signal& y) const override { return b.adjoint(a.adjoint(y)); }
  LinearOperator a;
  LinearOperator b;
};

struct CustomImpl final : LinearOperator::Impl {
  std::function<Signal(const Signal&)> fwd;
  std::function<Signal(const Signal&)> adj;
  Signal apply(const Signal& x) const override { return fwd(x); }
  Signal adjoint(const Signal& y) const override { return adj(y); }
};

}  // namespace detail

/// Dense operator with i.i.d. N(0, 1/m) entries, so columns have unit
/// expected squared norm.
inline LinearOperator make_gaussian(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw InvalidParameter("make_gaussian: dimensions must be >= 1");
  Rng rng = make_rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(static_cast<double>(m)));
  Eigen::MatrixXd M(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) M(i, j) = dist(rng);
  return {m, n, OperatorKind::dense_gaussian, std::make_shared<detail::DenseImpl>(std::move(M))};
}

/// Binary m x n matrix with exactly d ones per column, placed without
/// replacement (adjacency matrix of a random left-d-regular bipartite graph).
inline LinearOperator make_expander(Index m, Index n, Index d, std::uint64_t seed) {
  if (m < 1 || n < 1) throw InvalidParameter("make_expander: dimensions must be >= 1");
  if (d < 1 || d > m) throw InvalidParameter("make_expander: need 1 <= d <= m");
  Rng rng = make_rng(seed);
  std::vector<std::vector<Index>> cols(static_cast<std::size_t>(n));
  for (auto& c : cols) {
    c = sample_without_replacement(m, d, rng);
    std::sort(c.begin(), c.end());
  }
  return {m, n, OperatorKind::expander, std::make_shared<detail::ExpanderImpl>(m, std::move(cols))};
}

/// Haar synthesis operator on p x p images (maps wavelet coefficients to
/// pixels); its adjoint is the analysis transform.
inline LinearOperator make_haar2d(Index p) {
  if (p < 2 || !is_power_of_two(p))
    throw InvalidParameter("make_haar2d: side must be a power of two >= 2");
  return {p * p, p * p, OperatorKind::haar2d, std::make_shared<detail::HaarImpl>(p)};
}

inline LinearOperator make_identity(Index n) {
  return {n, n, OperatorKind::identity, std::make_shared<detail::IdentityImpl>()};
}

inline LinearOperator make_dense(Eigen::MatrixXd M) {
  const Index r = M.rows(), c = M.cols();
  return {r, c, OperatorKind::dense, std::make_shared<detail::DenseImpl>(std::move(M))};
}

inline LinearOperator make_diagonal(Signal d) {
  const Index n = d.size();
  return {n, n, OperatorKind::diagonal, std::make_shared<detail::DiagonalImpl>(std::move(d))};
}

inline LinearOperator make_custom(Index rows, Index cols,
                                  std::function<Signal(const Signal&)> forward,
                                  std::function<Signal(const Signal&)> adjoint) {
  auto impl = std::make_shared<detail::CustomImpl>();
  impl->fwd = std::move(forward);
  impl->adj = std::move(adjoint);
  return {rows, cols, OperatorKind::custom, std::move(impl)};
}

/// outer ∘ inner.
inline LinearOperator compose(const LinearOperator& outer, const LinearOperator& inner) {
  if (outer.cols() != inner.rows()) throw InvalidParameter("compose: dimension mismatch");
  return {outer.rows(), inner.cols(), OperatorKind::composition,
          std::make_shared<detail::CompositionImpl>(outer, inner)};
}

/// Expander structure, for inspection (nullptr for other kinds).
inline const std::vector<std::vector<Index>>* expander_columns(const LinearOperator& A) {
  if (A.kind() != OperatorKind::expander) return nullptr;
  return &static_cast<const detail::ExpanderImpl&>(A.impl()).ones;
}

/// Power-iteration estimate of sigma_max(A)^2 = ||A^T A||. The start vector
/// is fixed, and the returned Rayleigh quotients are non-decreasing in
/// `iters`.
inline double lipschitz_estimate(const LinearOperator& A, int iters = 100) {
  if (iters < 1) throw InvalidParameter("lipschitz_estimate: iters must be >= 1");
  Rng rng = make_rng(0x5eedULL);
  Signal v = gaussian_vector(A.cols(), rng).cwiseAbs().array() + 1.0;
  v /= v.norm();
  double estimate = 0.0;
  for (int it = 0; it < iters; ++it) {
    const Signal Av = A.apply(v);
    const double q = Av.squaredNorm();
    if (q == 0.0) return 0.0;
    estimate = q;  // Rayleigh quotient of A^T A at the unit vector v
    Signal w = A.adjoint(Av);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
  }
  return estimate;
}

}  // namespace structsparse
