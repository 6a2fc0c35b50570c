#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "structsparse/core/linear_operator.hpp"
#include "structsparse/core/random.hpp"
#include "structsparse/prox/norms.hpp"
#include "structsparse/submodular/lovasz.hpp"
#include "structsparse/submodular/mm.hpp"
#include "structsparse/submodular/prox_lovasz.hpp"
#include "structsparse/submodular/set_function.hpp"
#include "structsparse/submodular/sfm.hpp"

namespace ss = structsparse;
namespace sm = structsparse::submodular;
using ss::Index;
using ss::Signal;

namespace {

struct RandomGraph {
  sm::CutFunction cut;
  std::vector<oracle::WEdge> edges;
};

RandomGraph random_graph(std::mt19937_64& rng, int n, double density) {
  RandomGraph g;
  std::vector<sm::Edge> e;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (u(rng) < density) {
        const double w = 0.1 + u(rng) * 2.0;
        e.push_back({a, b, w});
        g.edges.push_back({a, b, w});
      }
  g.cut = sm::CutFunction(n, e);
  return g;
}

sm::Subset to_subset(oracle::Mask m, int n) {
  sm::Subset s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = oracle::bit(m, i);
  return s;
}

}  // namespace

TEST(SetFunction, NormalizedAtEmptySet) {
  const auto R = sm::SetFunction::from_oracle(3, [](const sm::Subset& s) {
    double v = 5.0;
    for (bool b : s) v += b ? 1.0 : 0.0;
    return v;
  });
  EXPECT_EQ(R(sm::Subset(3, false)), 0.0);
  EXPECT_EQ(R(sm::Subset(3, true)), 3.0);
}

TEST(SetFunction, CutIsSymmetric) {
  std::mt19937_64 rng(1);
  const auto g = random_graph(rng, 7, 0.5);
  const auto R = sm::SetFunction::cut(g.cut);
  for (oracle::Mask m = 0; m < 128; ++m) EXPECT_EQ(R(to_subset(m, 7)), R(to_subset(127 & ~m, 7)));
}

TEST(SetFunction, CutRejectsSelfLoopsAndNonPositiveWeights) {
  EXPECT_THROW(sm::CutFunction(2, {{0, 0, 1.0}}), ss::InvalidParameter);
  EXPECT_THROW(sm::CutFunction(2, {{0, 1, 0.0}}), ss::InvalidParameter);
}

TEST(Submodularity, Examples) {
  EXPECT_TRUE(sm::is_submodular(sm::SetFunction::cardinality(4)));
  EXPECT_TRUE(sm::is_submodular(sm::SetFunction::cut(sm::CutFunction(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}))));
  const auto square = [](double sign) {
    return sm::SetFunction::from_oracle(3, [sign](const sm::Subset& s) {
      double c = 0.0;
      for (bool b : s) c += b ? 1.0 : 0.0;
      return sign * c * c;
    });
  };
  EXPECT_TRUE(sm::is_submodular(square(-1.0)));
  EXPECT_FALSE(sm::is_submodular(square(1.0)));
  EXPECT_THROW(sm::is_submodular(sm::SetFunction::cardinality(13)), ss::CapabilityError);
}

TEST(Lovasz, Examples) {
  EXPECT_NEAR(sm::lovasz_extension(sm::SetFunction::cardinality(3), ss::make_signal({0.5, 0.2, 0.3})), 1.0, 1e-15);
  EXPECT_EQ(sm::lovasz_extension(sm::SetFunction::cut(sm::CutFunction::chain(3)), ss::make_signal({1, 0, 2})), 3.0);
}

TEST(Lovasz, TightOnIndicators) {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 8; ++n) {
    const auto g = random_graph(rng, n, 0.6);
    Signal w(n);
    for (int i = 0; i < n; ++i) w(i) = std::uniform_real_distribution<double>(-1, 1)(rng);
    const auto R = sm::SetFunction::cut(g.cut) + sm::SetFunction::modular(w) + 0.5 * sm::SetFunction::cardinality(n);
    for (oracle::Mask m = 0; m < (oracle::Mask{1} << n); ++m) {
      Signal ind(n);
      for (int i = 0; i < n; ++i) ind(i) = oracle::bit(m, i) ? 1.0 : 0.0;
      EXPECT_NEAR(sm::lovasz_extension(R, ind), R(to_subset(m, n)), 1e-12);
    }
  }
}

TEST(Lovasz, PositivelyHomogeneous) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 10)(rng);
    const auto g = random_graph(rng, n, 0.5);
    Signal x(n), w(n);
    for (int i = 0; i < n; ++i) {
      x(i) = std::normal_distribution<double>()(rng);
      w(i) = std::normal_distribution<double>()(rng);
    }
    const double alpha = std::uniform_real_distribution<double>(0.1, 10)(rng);
    for (const auto& R : {sm::SetFunction::cut(g.cut), sm::SetFunction::cardinality(n), sm::SetFunction::modular(w)}) {
      const double base = sm::lovasz_extension(R, x);
      EXPECT_NEAR(sm::lovasz_extension(R, alpha * x), alpha * base, 1e-12 * std::max(1.0, std::abs(alpha * base)));
    }
  }
}

TEST(Lovasz, CutExtensionIsTotalVariation) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 16)(rng);
    const auto g = random_graph(rng, n, 0.4);
    Signal x(n);
    for (int i = 0; i < n; ++i) x(i) = std::normal_distribution<double>()(rng);
    const double tv = oracle::tv_sum(g.edges, x.cwiseAbs());
    EXPECT_NEAR(sm::lovasz_extension(sm::SetFunction::cut(g.cut), x.cwiseAbs()), tv, 1e-12 * std::max(1.0, tv));
  }
}

TEST(Sfm, BruteforceExamples) {
  auto r = sm::sfm_bruteforce(sm::SetFunction::modular(ss::make_signal({-1, 1, 1})));
  EXPECT_EQ(r.minimizer.indices(), (std::vector<Index>{0}));
  EXPECT_EQ(r.value, -1.0);

  const auto two = sm::SetFunction::cut(sm::CutFunction(2, {{0, 1, 1.0}})) +
                   sm::SetFunction::modular(ss::make_signal({-3, 1}));
  r = sm::sfm_bruteforce(two);
  EXPECT_EQ(r.minimizer.indices(), (std::vector<Index>{0}));
  EXPECT_EQ(r.value, -2.0);

  r = sm::sfm_bruteforce(sm::SetFunction::cardinality(4));
  EXPECT_TRUE(r.minimizer.empty());
  EXPECT_EQ(r.value, 0.0);
  EXPECT_THROW(sm::sfm_bruteforce(sm::SetFunction::cardinality(21)), ss::CapabilityError);
}

TEST(Sfm, GraphcutExamples) {
  auto r = sm::sfm_graphcut(sm::CutFunction(2, {{0, 1, 1.0}}), {ss::make_signal({-3, 1})});
  EXPECT_EQ(r.minimizer.indices(), (std::vector<Index>{0}));
  EXPECT_EQ(r.value, -2.0);
  r = sm::sfm_graphcut(sm::CutFunction(3, {}), {ss::make_signal({1, 2, 0.5})});
  EXPECT_TRUE(r.minimizer.empty());
}

TEST(Sfm, GraphcutMatchesBruteforceOnLattice) {
  std::mt19937_64 rng(5);
  const auto cut = sm::CutFunction::lattice(4, 4, 1.0);
  for (int t = 0; t < 50; ++t) {
    Signal w(16);
    for (int i = 0; i < 16; ++i) w(i) = std::uniform_int_distribution<int>(-4, 3)(rng);
    const auto gc = sm::sfm_graphcut(cut, {w});
    const auto bf = sm::sfm_bruteforce(sm::SetFunction::cut(cut) + sm::SetFunction::modular(w));
    EXPECT_EQ(gc.value, bf.value);
    EXPECT_EQ(gc.minimizer.indices(), bf.minimizer.indices());
  }
}

TEST(Sfm, MinnormExamples) {
  auto r = sm::sfm_minnorm(sm::SetFunction::modular(ss::make_signal({-1, 1})));
  EXPECT_EQ(r.minimizer.indices(), (std::vector<Index>{0}));
  EXPECT_NEAR(r.value, -1.0, 1e-12);
  r = sm::sfm_minnorm(sm::SetFunction::cardinality(5));
  EXPECT_TRUE(r.minimizer.empty());
  EXPECT_EQ(r.value, 0.0);
  const auto two = sm::SetFunction::cut(sm::CutFunction(2, {{0, 1, 1.0}})) +
                   sm::SetFunction::modular(ss::make_signal({-3, 1}));
  EXPECT_NEAR(sm::sfm_minnorm(two).value, -2.0, 1e-9);
}

TEST(Sfm, BackendsAgreeOnRandomCutPlusModular) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const auto g = random_graph(rng, n, 0.35);
    Signal w(n);
    for (int i = 0; i < n; ++i) w(i) = std::uniform_real_distribution<double>(-2, 1)(rng);
    const auto F = sm::SetFunction::cut(g.cut) + sm::SetFunction::modular(w);
    const double exact = oracle::set_min(n, [&](oracle::Mask m) {
      return oracle::cut_value(g.edges, m) + [&] {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          if (oracle::bit(m, i)) s += w(i);
        return s;
      }();
    });
    const auto bf = sm::sfm_bruteforce(F);
    EXPECT_NEAR(bf.value, exact, 1e-12);
    EXPECT_EQ(sm::sfm_graphcut(g.cut, {w}).value, bf.value);
    EXPECT_NEAR(sm::sfm_minnorm(F, 1e-6).value, bf.value, 1e-6);
  }
}

TEST(Sfm, MinimizersFormALattice) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 8)(rng);
    const auto g = random_graph(rng, n, 0.5);
    Signal w(n);
    for (int i = 0; i < n; ++i) w(i) = std::uniform_int_distribution<int>(-2, 1)(rng);  // ties are common
    const auto F = sm::SetFunction::cut(sm::CutFunction(n, [&] {
                     std::vector<sm::Edge> e;
                     for (const auto& ed : g.edges) e.push_back({ed.u, ed.v, 1.0});
                     return e;
                   }())) +
                   sm::SetFunction::modular(w);
    double best = std::numeric_limits<double>::infinity();
    std::vector<oracle::Mask> minimizers;
    for (oracle::Mask m = 0; m < (oracle::Mask{1} << n); ++m) {
      const double v = F(to_subset(m, n));
      if (v < best - 1e-12) {
        best = v;
        minimizers = {m};
      } else if (std::abs(v - best) <= 1e-12) {
        minimizers.push_back(m);
      }
    }
    for (auto a : minimizers)
      for (auto b : minimizers) {
        EXPECT_NEAR(F(to_subset(a & b, n)), best, 1e-12);
        EXPECT_NEAR(F(to_subset(a | b, n)), best, 1e-12);
      }
    // The reported minimizer is the inclusion-minimal one.
    oracle::Mask meet = ~oracle::Mask{0};
    for (auto a : minimizers) meet &= a;
    const auto bf = sm::sfm_bruteforce(F);
    EXPECT_EQ(bf.minimizer.size(), static_cast<std::size_t>(std::popcount(meet)));
    for (Index i : bf.minimizer) EXPECT_TRUE(oracle::bit(meet, i));
  }
}

TEST(Mm, SingleStepHandExample) {
  const auto A = ss::make_identity(3);
  const auto R = sm::SetFunction::cut(sm::CutFunction::chain(3));
  sm::MMConfig cfg;
  cfg.lambda = 1.0;
  cfg.tau = 0.0;
  cfg.max_iters = 1;
  cfg.lipschitz = 1.0;
  const auto res = sm::mm_solve(A, ss::make_signal({10, 10, 0}), R, cfg, Signal::Zero(3));
  EXPECT_EQ(res.estimate, ss::make_signal({10, 10, 0}));
  ASSERT_EQ(res.trace.size(), 2u);
  EXPECT_EQ(res.trace.back(), 1.0);
}

TEST(Mm, NoRegularizerIsGradientDescent) {
  const auto A = ss::make_gaussian(10, 20, 3);
  ss::Rng rng = ss::make_rng(4);
  const Signal u = ss::gaussian_vector(10, rng);
  sm::MMConfig cfg;
  cfg.lambda = 0.0;
  cfg.tau = 0.0;
  cfg.max_iters = 50;
  const auto res = sm::mm_solve(A, u, sm::SetFunction::cardinality(20), cfg, Signal::Zero(20));
  EXPECT_LT(res.trace.back(), res.trace.front());
  for (std::size_t i = 1; i < res.trace.size(); ++i) EXPECT_LE(res.trace[i], res.trace[i - 1] + 1e-12);
}

TEST(Mm, TraceMonotoneOnClusteredImage) {
  const Index s = 16, n = s * s;
  Signal x = Signal::Zero(n);
  for (Index r = 3; r < 9; ++r)
    for (Index c = 4; c < 11; ++c) x(r * s + c) = 0.8;
  const auto A = ss::make_gaussian(100, n, 9);
  const Signal u = A.apply(x);
  sm::MMConfig cfg;
  cfg.lambda = 0.01;
  cfg.tau = 0.01;
  cfg.max_iters = 100;
  cfg.tol = 0.0;
  const auto res = sm::mm_solve(A, u, sm::SetFunction::cut(sm::CutFunction::lattice(s, s)), cfg, Signal::Zero(n));
  for (std::size_t i = 1; i < res.trace.size(); ++i) EXPECT_LE(res.trace[i], res.trace[i - 1] + 1e-12) << i;
}

TEST(ProxLovasz, CardinalityIsSoftThreshold) {
  EXPECT_LT((sm::prox_lovasz(sm::SetFunction::cardinality(2), ss::make_signal({2, -0.5}), 1.0) -
             ss::make_signal({1, 0}))
                .norm(),
            1e-10);
  ss::Rng rng = ss::make_rng(10);
  for (int t = 0; t < 50; ++t) {
    const Signal x = ss::gaussian_vector(12, rng, 2.0);
    const double lambda = ss::uniform(rng, 0.05, 2.0);
    const Signal y = sm::prox_lovasz(sm::SetFunction::cardinality(12), x, lambda);
    EXPECT_LT((y - ss::prox::soft_threshold(x, lambda)).lpNorm<Eigen::Infinity>(), 1e-10);
  }
}

TEST(ProxLovasz, ChainCutIsOneDimensionalTv) {
  ss::Rng rng = ss::make_rng(11);
  for (int t = 0; t < 30; ++t) {
    const Index n = ss::uniform_index(rng, 2, 20);
    const Signal x = ss::gaussian_vector(n, rng);
    const Signal y = sm::prox_lovasz(sm::SetFunction::cut(sm::CutFunction::chain(n)), x, 0.3);
    EXPECT_LT((y - ss::prox::tv1d_prox(x, 0.3)).lpNorm<Eigen::Infinity>(), 1e-6);
  }
}

TEST(ProxLovasz, SmallLambdaApproachesIdentity) {
  const Signal x = ss::make_signal({0.3, -1.2, 2.0, 0.1});
  const auto R = sm::SetFunction::cut(sm::CutFunction::chain(4));
  EXPECT_LT((sm::prox_lovasz(R, x, 1e-9) - x).norm(), 1e-8);
  EXPECT_THROW(sm::prox_lovasz(R, x, 0.0), ss::InvalidParameter);
}

TEST(ProxLovasz, BeatsRandomPerturbations) {
  ss::Rng rng = ss::make_rng(12);
  std::mt19937_64 grng(12);
  const auto g = random_graph(grng, 8, 0.4);
  const Signal w = ss::gaussian_vector(8, rng).cwiseAbs();
  const auto cases = {std::pair{sm::SetFunction::cut(g.cut), sm::LovaszProxMode::extension},
                      std::pair{sm::SetFunction::cardinality(8) + sm::SetFunction::modular(w), sm::LovaszProxMode::norm}};
  for (const auto& [R, mode] : cases) {
    const Signal x = ss::gaussian_vector(8, rng, 2.0);
    const double lambda = 0.4;
    const Signal y = sm::prox_lovasz(R, x, lambda, mode);
    const bool norm = mode == sm::LovaszProxMode::norm;
    auto obj = [&](const Signal& v) {
      return 0.5 * (v - x).squaredNorm() + lambda * sm::lovasz_extension(R, norm ? Signal(v.cwiseAbs()) : v);
    };
    const double at = obj(y);
    for (int t = 0; t < 1000; ++t) {
      Signal d = ss::gaussian_vector(8, rng);
      d *= 1e-3 / d.norm();
      EXPECT_LE(at, obj(y + d) + 1e-12);
    }
  }
}
