#include <gtest/gtest.h>

#include <deque>
#include <set>

#include "symform/error.hpp"
#include "symform/topology.hpp"
#include "unit/test_support.hpp"

namespace symform {
namespace {

using testing::kPi;

std::vector<Edge> links(const InteractionGraph& g) {
  std::vector<Edge> out;
  for (const auto& e : g.edges) out.push_back({e.u, e.v});
  return out;
}

InteractionGraph graph_of(int n, const std::vector<Edge>& edges) {
  InteractionGraph g{n, 2, {}};
  for (const auto& e : edges) g.edges.push_back({e.u, e.v, CyclicAutomorphism(n, 1)});
  return g;
}

TEST(CycleGraph, EdgesAndDegrees) {
  const CycleGraph c(5);
  const auto edges = c.edges();
  ASSERT_EQ(edges.size(), 5u);
  std::vector<int> degree(6, 0);
  for (const auto& e : edges) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  for (int i = 1; i <= 5; ++i) EXPECT_EQ(degree[static_cast<std::size_t>(i)], 2);
  EXPECT_TRUE(c.contains({5, 1}));
  EXPECT_TRUE(c.contains({1, 5}));
  EXPECT_FALSE(c.contains({1, 3}));
  EXPECT_THROW(CycleGraph(2), InvalidArgument);
}

TEST(CycleMinusEdge, PaperPathOnFour) {
  const auto g = cycle_minus_edge(4, {4, 1});
  EXPECT_EQ(links(g), (std::vector<Edge>{{1, 2}, {2, 3}, {3, 4}}));
  for (const auto& e : g.edges) EXPECT_EQ(e.forward.shift(), 1);
}

TEST(CycleMinusEdge, SixNodesFiveEdges) {
  const auto g = cycle_minus_edge(6, {6, 1});
  EXPECT_EQ(g.edges.size(), 5u);
  EXPECT_TRUE(validate(g).ok());
}

TEST(CycleMinusEdge, ThreeNodesRemoveFirst) {
  EXPECT_EQ(links(cycle_minus_edge(3, {1, 2})), (std::vector<Edge>{{2, 3}, {3, 1}}));
}

TEST(CycleMinusEdge, RejectsNonCycleEdge) {
  EXPECT_THROW(cycle_minus_edge(5, {1, 3}), InvalidArgument);
  EXPECT_THROW(cycle_minus_edge(2, {1, 2}), InvalidArgument);
}

TEST(Validate, Reports) {
  EXPECT_TRUE(validate(graph_of(4, {{1, 2}, {2, 3}, {3, 4}})).ok());
  const auto cyclic = validate(graph_of(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}}));
  ASSERT_FALSE(cyclic.ok());
  EXPECT_EQ(*cyclic.violation, "not acyclic");
  const auto split = validate(graph_of(4, {{1, 2}, {3, 4}}));
  ASSERT_FALSE(split.ok());
  EXPECT_EQ(*split.violation, "not connected");
  EXPECT_FALSE(validate(graph_of(4, {{1, 3}, {2, 3}, {3, 4}})).ok());  // (1,3) not in C_4
  EXPECT_FALSE(validate(graph_of(4, {{1, 2}, {2, 1}, {3, 4}})).ok());
}

TEST(RotationChain, FourPath) {
  const auto chain = rotation_chain(cycle_minus_edge(4, {4, 1}), assignment(4));
  ASSERT_EQ(chain.size(), 4);
  for (int i = 1; i <= 4; ++i) {
    EXPECT_LT((chain[i].matrix() - testing::rot((i - 1) * kPi / 2)).cwiseAbs().maxCoeff(), 1e-15);
  }
  EXPECT_EQ(*chain.shifts, (std::vector<int>{0, 1, 2, 3}));
}

TEST(RotationChain, SixPathLastBlock) {
  const auto chain = rotation_chain(cycle_minus_edge(6, {6, 1}), assignment(6));
  EXPECT_LT((chain[6].matrix() - testing::rot(5 * kPi / 3)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RotationChain, RejectsInvalidGraph) {
  EXPECT_THROW(rotation_chain(graph_of(4, {{1, 2}, {3, 4}}), assignment(4)), InvalidArgument);
  EXPECT_THROW(rotation_chain(cycle_minus_edge(4, {4, 1}), assignment(5)), InvalidArgument);
}

TEST(RotationChain, EdgeRelationOnEveryTree) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto t = testing::random_tree(rng);
    auto g = cycle_minus_edge(t.n, {t.removed, t.removed % t.n + 1});
    std::uniform_int_distribution<int> shift(0, t.n - 1);
    for (auto& e : g.edges) e.forward = CyclicAutomorphism(t.n, shift(rng));
    const auto tau = assignment(t.n);
    const auto chain = rotation_chain(g, tau);
    EXPECT_LT((chain[1].matrix() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    for (const auto& e : g.edges) {
      const Eigen::MatrixXd expected = tau(e.forward).matrix() * chain[e.u].matrix();
      EXPECT_LT((chain[e.v].matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
    }
    for (const auto& s : chain.blocks) EXPECT_LT(s.orthogonality_defect(), 1e-12);
  }
}

TEST(RotationChain, GeneratorPathIsRegularTarget) {
  for (int n = 3; n <= 12; ++n) {
    for (int r = 1; r <= n; ++r) {
      const auto g = cycle_minus_edge(n, {r, r % n + 1});
      EXPECT_EQ(g.edges.size(), static_cast<std::size_t>(n - 1));
      const auto chain = rotation_chain(g, assignment(n));
      for (int i = 1; i <= n; ++i) {
        EXPECT_EQ((*chain.shifts)[static_cast<std::size_t>(i - 1)], i - 1);
      }
      EXPECT_TRUE(reproduces_cyclic_target(chain, n));
    }
  }
}

TEST(RotationChain, MixedShiftsFlagged) {
  auto g = cycle_minus_edge(4, {4, 1});
  g.edges[1].forward = CyclicAutomorphism(4, 2);
  EXPECT_FALSE(reproduces_cyclic_target(rotation_chain(g, assignment(4)), 4));
  // shift 3 on every edge of C_4 is the reversed labelling: still regular.
  auto reversed = cycle_minus_edge(4, {4, 1});
  for (auto& e : reversed.edges) e.forward = CyclicAutomorphism(4, 3);
  EXPECT_TRUE(reproduces_cyclic_target(rotation_chain(reversed, assignment(4)), 4));
}

TEST(RotationChain, RotationGraphOverloadAgrees) {
  const auto g = cycle_minus_edge(7, {3, 4});
  const auto tau = assignment(7);
  const auto a = rotation_chain(g, tau);
  const auto b = rotation_chain(with_rotations(g, tau));
  for (int i = 1; i <= 7; ++i) EXPECT_LT((a[i].matrix() - b[i].matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PermutationAction, Examples) {
  EXPECT_EQ(permutation_action(CyclicAutomorphism(3, 1), 1), 2);
  for (int i = 1; i <= 5; ++i) EXPECT_EQ(permutation_action(CyclicAutomorphism(5, 0), i), i);
  EXPECT_EQ(permutation_action(CyclicAutomorphism(3, 2), 1), 3);
  EXPECT_THROW(permutation_action(CyclicAutomorphism(3, 1), 4), InvalidArgument);
}

TEST(Validate, BfsVisitsEveryNode) {
  for (int n = 3; n <= 12; ++n) {
    const auto g = cycle_minus_edge(n, {n, 1});
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n + 1));
    for (const auto& e : g.edges) {
      adj[static_cast<std::size_t>(e.u)].push_back(e.v);
      adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    std::set<int> seen{1};
    std::deque<int> q{1};
    while (!q.empty()) {
      const int at = q.front();
      q.pop_front();
      for (int next : adj[static_cast<std::size_t>(at)]) {
        if (seen.insert(next).second) q.push_back(next);
      }
    }
    EXPECT_EQ(static_cast<int>(seen.size()), n);
  }
}

}  // namespace
}  // namespace symform
