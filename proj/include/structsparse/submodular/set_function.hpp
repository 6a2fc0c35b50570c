#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/signal.hpp"

namespace structsparse::submodular {

using Subset = std::vector<bool>;

struct Edge {
  Index u;
  Index v;
  double weight = 1.0;
};

/// Weighted undirected cut function R(S) = sum of w_uv over edges with exactly
/// one endpoint in S (the Ising penalty on the support pattern).
class CutFunction {
 public:
  CutFunction() = default;

  CutFunction(Index n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    adjacency_.assign(static_cast<std::size_t>(n_), {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Edge& ed = edges_[e];
      if (ed.u < 0 || ed.v < 0 || ed.u >= n_ || ed.v >= n_) throw InvalidParameter("CutFunction: vertex out of range");
      if (ed.u == ed.v) throw InvalidParameter("CutFunction: self-loop");
      if (!(ed.weight > 0.0)) throw InvalidParameter("CutFunction: weights must be positive");
      adjacency_[static_cast<std::size_t>(ed.u)].push_back({ed.v, ed.weight});
      adjacency_[static_cast<std::size_t>(ed.v)].push_back({ed.u, ed.weight});
    }
  }

  /// Path 0 - 1 - ... - (n-1).
  static CutFunction chain(Index n, double weight = 1.0) {
    std::vector<Edge> e;
    for (Index i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, weight});
    return {n, std::move(e)};
  }

  /// 4-neighbour lattice on a rows x cols grid, row-major vertex numbering.
  static CutFunction lattice(Index rows, Index cols, double weight = 1.0) {
    std::vector<Edge> e;
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c) {
        const Index v = r * cols + c;
        if (c + 1 < cols) e.push_back({v, v + 1, weight});
        if (r + 1 < rows) e.push_back({v, v + cols, weight});
      }
    return {rows * cols, std::move(e)};
  }

  Index size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  double operator()(const Subset& s) const {
    double v = 0.0;
    for (const Edge& e : edges_)
      if (s[static_cast<std::size_t>(e.u)] != s[static_cast<std::size_t>(e.v)]) v += e.weight;
    return v;
  }

  /// Change in R when v joins `in` (v not yet in it).
  double gain(const Subset& in, Index v) const {
    double g = 0.0;
    for (const auto& [u, w] : adjacency_[static_cast<std::size_t>(v)]) g += in[static_cast<std::size_t>(u)] ? -w : w;
    return g;
  }

  CutFunction scaled(double alpha) const {
    std::vector<Edge> e = edges_;
    for (auto& ed : e) ed.weight *= alpha;
    return {n_, std::move(e)};
  }

 private:
  struct Neighbor {
    Index to;
    double w;
  };
  Index n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// R(S) = sum_{i in S} w_i.
struct ModularFunction {
  Signal weights;
  double operator()(const Subset& s) const {
    double v = 0.0;
    for (Index i = 0; i < weights.size(); ++i)
      if (s[static_cast<std::size_t>(i)]) v += weights(i);
    return v;
  }
};

enum class SetFunctionKind { generic, modular, cardinality, cut, sum };

inline std::string to_string(SetFunctionKind k) {
  switch (k) {
    case SetFunctionKind::generic: return "generic";
    case SetFunctionKind::modular: return "modular";
    case SetFunctionKind::cardinality: return "cardinality";
    case SetFunctionKind::cut: return "cut";
    case SetFunctionKind::sum: return "sum";
  }
  return "unknown";
}

/// Cut-plus-modular decomposition used to route minimization to max-flow.
struct CutPlusModular {
  CutFunction cut;
  ModularFunction modular;
};

/// Set-function oracle over the ground set {0..n-1}, normalized so that
/// R(empty) = 0. A SetFunction is a non-negative combination of terms; the
/// structured terms (modular, cardinality, cut) keep their identity so that
/// solvers can dispatch on them.
class SetFunction {
 public:
  using Oracle = std::function<double(const Subset&)>;

  static SetFunction from_oracle(Index n, Oracle oracle, bool monotone = false) {
    const double at_empty = oracle(Subset(static_cast<std::size_t>(n), false));
    Oracle normalized = at_empty == 0.0 ? std::move(oracle)
                                        : Oracle([f = std::move(oracle), at_empty](const Subset& s) { return f(s) - at_empty; });
    return SetFunction(n, Term{1.0, Generic{std::move(normalized), monotone}});
  }

  static SetFunction modular(Signal w) {
    const Index n = w.size();
    return SetFunction(n, Term{1.0, ModularFunction{std::move(w)}});
  }

  static SetFunction cardinality(Index n) { return SetFunction(n, Term{1.0, Cardinality{}}); }

  static SetFunction cut(CutFunction c) {
    const Index n = c.size();
    return SetFunction(n, Term{1.0, std::move(c)});
  }

  Index size() const noexcept { return n_; }

  SetFunctionKind kind() const {
    if (terms_.size() != 1) return SetFunctionKind::sum;
    return std::visit(
        [](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, ModularFunction>) return SetFunctionKind::modular;
          else if constexpr (std::is_same_v<T, Cardinality>) return SetFunctionKind::cardinality;
          else if constexpr (std::is_same_v<T, CutFunction>) return SetFunctionKind::cut;
          else return SetFunctionKind::generic;
        },
        terms_.front().f);
  }

  double operator()(const Subset& s) const {
    if (static_cast<Index>(s.size()) != n_) throw InvalidParameter("SetFunction: subset size mismatch");
    double v = 0.0;
    for (const Term& t : terms_) v += t.coef * evaluate(t, s);
    return v;
  }

  double operator()(const Support& s) const { return (*this)(s.indicator()); }

  /// Marginal gains along an ordering: entry k is R({o_0..o_k}) - R({o_0..o_{k-1}}).
  /// `order` may be a prefix of a permutation.
  std::vector<double> chain_gains(const std::vector<Index>& order) const {
    std::vector<double> gains(order.size(), 0.0);
    for (const Term& t : terms_) add_gains(t, order, gains);
    return gains;
  }

  /// True when every term is known to be non-decreasing.
  bool known_monotone() const {
    for (const Term& t : terms_) {
      const bool mono = std::visit(
          [](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ModularFunction>) return (f.weights.array() >= 0.0).all();
            else if constexpr (std::is_same_v<T, Cardinality>) return true;
            else if constexpr (std::is_same_v<T, CutFunction>) return f.edges().empty();
            else return f.monotone;
          },
          t.f);
      if (!mono || t.coef < 0.0) return false;
    }
    return true;
  }

  /// Splits into one cut function plus one modular function when every term
  /// is structured (modular, cardinality or a non-negatively weighted cut).
  std::optional<CutPlusModular> as_cut_plus_modular() const {
    std::vector<Edge> edges;
    Signal w = Signal::Zero(n_);
    for (const Term& t : terms_) {
      bool ok = true;
      std::visit(
          [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ModularFunction>) {
              w += t.coef * f.weights;
            } else if constexpr (std::is_same_v<T, Cardinality>) {
              w.array() += t.coef;
            } else if constexpr (std::is_same_v<T, CutFunction>) {
              if (t.coef < 0.0) ok = false;
              else if (t.coef > 0.0)
                for (Edge e : f.edges()) {
                  e.weight *= t.coef;
                  edges.push_back(e);
                }
            } else {
              ok = false;
            }
          },
          t.f);
      if (!ok) return std::nullopt;
    }
    return CutPlusModular{CutFunction(n_, std::move(edges)), ModularFunction{std::move(w)}};
  }

  friend SetFunction operator+(const SetFunction& a, const SetFunction& b) {
    if (a.n_ != b.n_) throw InvalidParameter("SetFunction: ground-set size mismatch");
    SetFunction out = a;
    out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
    return out;
  }

  friend SetFunction operator*(double alpha, const SetFunction& f) {
    SetFunction out = f;
    for (Term& t : out.terms_) t.coef *= alpha;
    return out;
  }

 private:
  struct Cardinality {};
  struct Generic {
    Oracle oracle;
    bool monotone = false;
  };
  using Component = std::variant<ModularFunction, Cardinality, CutFunction, Generic>;
  struct Term {
    double coef;
    Component f;
  };

  SetFunction(Index n, Term t) : n_(n) { terms_.push_back(std::move(t)); }

  static double evaluate(const Term& t, const Subset& s) {
    return std::visit(
        [&](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Cardinality>) return static_cast<double>(std::count(s.begin(), s.end(), true));
          else if constexpr (std::is_same_v<T, Generic>) return f.oracle(s);
          else return f(s);
        },
        t.f);
  }

  void add_gains(const Term& t, const std::vector<Index>& order, std::vector<double>& gains) const {
    std::visit(
        [&](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, ModularFunction>) {
            for (std::size_t k = 0; k < order.size(); ++k) gains[k] += t.coef * f.weights(order[k]);
          } else if constexpr (std::is_same_v<T, Cardinality>) {
            for (std::size_t k = 0; k < order.size(); ++k) gains[k] += t.coef;
          } else if constexpr (std::is_same_v<T, CutFunction>) {
            Subset in(static_cast<std::size_t>(n_), false);
            for (std::size_t k = 0; k < order.size(); ++k) {
              gains[k] += t.coef * f.gain(in, order[k]);
              in[static_cast<std::size_t>(order[k])] = true;
            }
          } else {
            Subset in(static_cast<std::size_t>(n_), false);
            double prev = 0.0;
            for (std::size_t k = 0; k < order.size(); ++k) {
              in[static_cast<std::size_t>(order[k])] = true;
              const double cur = f.oracle(in);
              gains[k] += t.coef * (cur - prev);
              prev = cur;
            }
          }
        },
        t.f);
  }

  Index n_ = 0;
  std::vector<Term> terms_;
};

/// Ordering of x by decreasing value, ties broken by index.
inline std::vector<Index> descending_order(const Signal& x) {
  std::vector<Index> order(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return x(a) > x(b); });
  return order;
}

}  // namespace structsparse::submodular
