#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "structsparse/core/random.hpp"
#include "structsparse/models/dispersive.hpp"
#include "structsparse/models/groups.hpp"
#include "structsparse/models/ksparse.hpp"
#include "structsparse/models/rc_tree.hpp"

namespace ss = structsparse;
namespace md = structsparse::models;
using ss::Index;
using ss::Signal;

namespace {

md::GroupStructure three_chain_groups() {
  // Three groups of five over eleven elements, overlapping in pairs.
  return md::GroupStructure(11, {{0, 1, 2, 3, 4}, {3, 4, 5, 6, 7}, {6, 7, 8, 9, 10}});
}

Signal three_chain_signal() { return ss::make_signal({0, 0, 1, 1, 1, 0, 1, 1, 1, 0, 0}); }

}  // namespace

TEST(KSparse, Examples) {
  EXPECT_EQ(md::project_ksparse(ss::make_signal({3, -1, 0, 2}), 2), ss::make_signal({3, 0, 0, 2}));
  const Signal x = ss::make_signal({0.5, -2, 1});
  EXPECT_EQ(md::project_ksparse(x, 3), x);
  EXPECT_EQ(md::project_ksparse(ss::make_signal({1, 1, 1}), 1), ss::make_signal({1, 0, 0}));
}

TEST(Dispersive, Examples) {
  auto p = md::project_dispersive(ss::make_signal({2, 3, 1, 4}), {2, 2, 4});
  EXPECT_EQ(p.support.indices(), (std::vector<Index>{1, 3}));
  EXPECT_EQ(p.signal, ss::make_signal({0, 3, 0, 4}));

  p = md::project_dispersive(ss::make_signal({5, 5, 5}), {2, 2, 3});
  EXPECT_EQ(p.support.indices(), (std::vector<Index>{0, 2}));
  EXPECT_EQ(p.signal, ss::make_signal({5, 0, 5}));
}

TEST(Dispersive, UnitSeparationEqualsKSparse) {
  ss::Rng rng = ss::make_rng(1);
  for (int t = 0; t < 300; ++t) {
    const Index n = ss::uniform_index(rng, 1, 30);
    const Index k = ss::uniform_index(rng, 1, n);
    Signal x = ss::gaussian_vector(n, rng);
    if (t % 3 == 0) x = x.array().round();  // plenty of ties
    ss::Support s;
    const Signal ks = md::project_ksparse(x, k, &s);
    const auto p = md::project_dispersive(x, {k, 1, n});
    EXPECT_EQ(p.support.indices(), s.indices());
    EXPECT_EQ(p.signal, ks);
  }
}

TEST(Dispersive, MatchesExhaustiveSearchAndAdmits) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 500; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 14)(rng);
    const int k = std::uniform_int_distribution<int>(1, std::min(4, n))(rng);
    const int delta = std::uniform_int_distribution<int>(1, n)(rng);
    const Signal x = oracle::random_integers(rng, n, -6, 6);
    const md::DispersiveModel model{k, delta, n};
    const auto p = md::project_dispersive(x, model);
    EXPECT_EQ(ss::energy_on(x, p.support), oracle::dispersive_best(x, k, delta));
    EXPECT_TRUE(model.admits(p.support));
  }
}

TEST(Dispersive, Idempotent) {
  ss::Rng rng = ss::make_rng(3);
  for (int t = 0; t < 100; ++t) {
    const Index n = ss::uniform_index(rng, 5, 40);
    const md::DispersiveModel model{ss::uniform_index(rng, 1, 5), ss::uniform_index(rng, 1, 6), n};
    const auto once = md::project_dispersive(ss::gaussian_vector(n, rng), model);
    EXPECT_EQ(md::project_dispersive(once.signal, model).signal, once.signal);
  }
}

TEST(Dispersive, RejectsBadParameters) {
  EXPECT_THROW(md::project_dispersive(Signal::Zero(4), {0, 1, 4}), ss::InvalidParameter);
  EXPECT_THROW(md::project_dispersive(Signal::Zero(4), {1, 5, 4}), ss::InvalidParameter);
  EXPECT_THROW(md::project_dispersive(Signal::Zero(4), {1, 1, 5}), ss::InvalidParameter);
}

TEST(RcTree, Examples) {
  const ss::Tree t({-1, 0, 0});
  auto p = md::project_rc_tree(ss::make_signal({1, 3, 2}), {t, 2});
  EXPECT_EQ(p.support.indices(), (std::vector<Index>{0, 1}));
  EXPECT_EQ(p.signal, ss::make_signal({1, 3, 0}));

  p = md::project_rc_tree(ss::make_signal({1, 3, 2}), {t, 1});
  EXPECT_EQ(p.support.indices(), (std::vector<Index>{0}));

  p = md::project_rc_tree(Signal::Zero(3), {t, 2});
  EXPECT_TRUE(p.support.empty());
  EXPECT_EQ(p.signal, Signal::Zero(3));
}

TEST(RcTree, MatchesExhaustiveSearchAndAdmits) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 500; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 14)(rng);
    const int k = std::uniform_int_distribution<int>(1, 4)(rng);
    const auto parent = oracle::random_forest(rng, n);
    const Signal x = oracle::random_integers(rng, n, -6, 6);
    const md::TreeModel model{ss::Tree(parent), k};
    const auto p = md::project_rc_tree(x, model);
    EXPECT_EQ(ss::energy_on(x, p.support), oracle::rc_tree_best(x, parent, k));
    EXPECT_TRUE(model.admits(p.support));
  }
}

TEST(RcTree, IdempotentOnWaveletTree) {
  ss::Rng rng = ss::make_rng(4);
  const md::TreeModel model{ss::wavelet_quadtree(8), 12};
  for (int t = 0; t < 20; ++t) {
    const auto once = md::project_rc_tree(ss::gaussian_vector(64, rng), model);
    EXPECT_EQ(md::project_rc_tree(once.signal, model).signal, once.signal);
  }
}

TEST(Groups, LooplessFlag) {
  EXPECT_TRUE(three_chain_groups().loopless());
  // Triangle of pairwise overlaps.
  EXPECT_FALSE(md::GroupStructure(6, {{0, 1, 2}, {2, 3, 4}, {4, 5, 1}}).loopless());
  // Element in three groups.
  EXPECT_FALSE(md::GroupStructure(3, {{0, 1}, {1, 2}, {1}}).loopless());
  EXPECT_THROW(md::GroupStructure(3, {{}}), ss::InvalidParameter);
  EXPECT_THROW(md::GroupStructure(3, {{0}}, {-1.0}), ss::InvalidParameter);
}

TEST(Groups, DpFindsOuterGroups) {
  const auto gs = three_chain_groups();
  const Signal c = three_chain_signal().cwiseAbs2();
  const auto dp = md::dp_loopless_groups(c, gs, 2);
  EXPECT_EQ(dp.groups, (std::vector<Index>{0, 2}));
  EXPECT_EQ(dp.weight, 6.0);
  const auto greedy = md::greedy_wmc(c, gs, 2);
  EXPECT_EQ(greedy.weight, 5.0);
  EXPECT_LT(greedy.weight, dp.weight);
}

TEST(Groups, GreedyExamples) {
  const md::GroupStructure gs(5, {{0, 1}, {1, 2, 3, 4}, {3}});
  const Signal c = ss::make_signal({0, 0, 2, 3, 0});
  const auto one = md::greedy_wmc(c, gs, 1);
  EXPECT_EQ(one.groups, (std::vector<Index>{1}));
  EXPECT_EQ(one.weight, 5.0);
  EXPECT_TRUE(md::greedy_wmc(Signal::Zero(5), gs, 2).groups.empty());
}

TEST(Groups, LoopyStructureRejectedByDp) {
  const md::GroupStructure gs(6, {{0, 1, 2}, {2, 3, 4}, {4, 5, 1}});
  EXPECT_THROW(md::dp_loopless_groups(Signal::Ones(6), gs, 2), ss::ModelViolation);
  EXPECT_THROW(md::dp_loopless_groups_sparse(Signal::Ones(6), gs, 2, 2), ss::ModelViolation);
}

TEST(Groups, AllGroupsCoverEverythingCoverable) {
  const auto gs = three_chain_groups();
  ss::Rng rng = ss::make_rng(2);
  const Signal c = ss::gaussian_vector(11, rng).cwiseAbs();
  EXPECT_NEAR(md::dp_loopless_groups(c, gs, 3).weight, c.sum(), 1e-12);
  EXPECT_NEAR(md::dp_loopless_groups_sparse(c, gs, 3, 11).weight, c.sum(), 1e-12);
}

TEST(Groups, DpMatchesExhaustiveAndGreedyBound) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 500; ++t) {
    const int M = std::uniform_int_distribution<int>(1, 6)(rng);
    int n = 0;
    const auto groups = oracle::random_loopless(rng, M, 14, n);
    const md::GroupStructure gs(n, groups);
    ASSERT_TRUE(gs.loopless());
    const Signal c = oracle::random_integers(rng, n, 0, 9);
    const int G = std::uniform_int_distribution<int>(1, M)(rng);
    const double best = oracle::coverage_best(c, groups, G);
    const auto dp = md::dp_loopless_groups(c, gs, G);
    EXPECT_EQ(dp.weight, best);
    EXPECT_LE(static_cast<int>(dp.groups.size()), G);
    double covered = 0.0;
    for (Index i : gs.cover(dp.groups)) covered += c(i);
    EXPECT_EQ(covered, best);
    EXPECT_GE(md::greedy_wmc(c, gs, G).weight, (1.0 - 1.0 / std::exp(1.0)) * best - 1e-12);
  }
}

TEST(Groups, SparseExample) {
  const md::GroupStructure gs(3, {{0, 1}, {1, 2}});
  const auto r = md::dp_loopless_groups_sparse(ss::make_signal({1, 4, 9}), gs, 1, 1);
  EXPECT_EQ(r.groups, (std::vector<Index>{1}));
  EXPECT_EQ(r.covered.indices(), (std::vector<Index>{2}));
  EXPECT_EQ(r.weight, 9.0);
}

TEST(Groups, SparseDpMatchesExhaustive) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 500; ++t) {
    const int M = std::uniform_int_distribution<int>(1, 6)(rng);
    int n = 0;
    const auto groups = oracle::random_loopless(rng, M, 14, n);
    const md::GroupStructure gs(n, groups);
    const Signal c = oracle::random_integers(rng, n, 0, 9);
    const int G = std::uniform_int_distribution<int>(1, M)(rng);
    const int K = std::uniform_int_distribution<int>(1, std::min(4, n))(rng);
    const auto r = md::dp_loopless_groups_sparse(c, gs, G, K);
    EXPECT_EQ(r.weight, oracle::sparse_coverage_best(c, groups, G, K));
    EXPECT_LE(static_cast<int>(r.covered.size()), K);
    EXPECT_LE(static_cast<int>(r.groups.size()), G);
    const auto cover = gs.cover(r.groups);
    for (Index i : r.covered) EXPECT_TRUE(cover.contains(i));
  }
}

TEST(Groups, GroupL0Examples) {
  const auto gs = three_chain_groups();
  EXPECT_EQ(md::group_l0(three_chain_signal(), gs), Index{2});
  EXPECT_EQ(md::group_l0(Signal::Zero(11), gs), Index{0});
  const md::GroupStructure partial(4, {{0, 1}, {1, 2}});
  EXPECT_FALSE(md::group_l0(ss::make_signal({0, 0, 0, 1}), partial).has_value());
}

TEST(Groups, GroupL0LoopyFallbackAndCapability) {
  const md::GroupStructure tri(6, {{0, 1, 2}, {2, 3, 4}, {4, 5, 1}});
  EXPECT_EQ(md::group_l0(ss::make_signal({1, 0, 0, 1, 0, 1}), tri), Index{3});
  EXPECT_EQ(md::group_l0(ss::make_signal({0, 1, 1, 0, 0, 0}), tri), Index{1});
  std::vector<std::vector<Index>> many;
  for (Index g = 0; g < 21; ++g) many.push_back({0, g + 1});
  const md::GroupStructure big(22, many);
  EXPECT_THROW(md::group_l0(Signal::Ones(22), big), ss::CapabilityError);
}

TEST(Groups, WeightedGroupL0) {
  const md::GroupStructure gs(4, {{0}, {1, 2}, {0, 1, 3}}, {1.0, 2.0, 3.0});
  EXPECT_EQ(md::group_l0_weighted(ss::make_signal({1, 1, 0, 0}), gs), 3.0);
  EXPECT_EQ(md::group_l0_weighted(ss::make_signal({1, 1, 1, 1}), gs), 5.0);
}
