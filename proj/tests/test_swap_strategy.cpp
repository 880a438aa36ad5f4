#include "oracles.hpp"

#include "swapmap/io.hpp"
#include "swapmap/swap_strategy.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace swapmap;

TEST(LineSwapStrategy, FourQubits) {
  const auto s = lineSwapStrategy(4);
  ASSERT_EQ(s.layers().size(), 2U);
  EXPECT_EQ(s.layers()[0].swaps, (std::vector<Edge>{Edge(0, 1), Edge(2, 3)}));
  EXPECT_EQ(s.layers()[1].swaps, (std::vector<Edge>{Edge(1, 2)}));
  EXPECT_EQ(s.order(), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(s.coupling(), lineCouplingMap(4));
}

TEST(LineSwapStrategy, LayerSizes) {
  const auto s10 = lineSwapStrategy(10);
  EXPECT_EQ(s10.layers()[0].swaps.size(), 5U);
  EXPECT_EQ(s10.layers()[1].swaps.size(), 4U);
  EXPECT_EQ(s10.depth(), 8U);
  const auto s40 = lineSwapStrategy(40);
  EXPECT_EQ(s40.layers()[0].swaps.size(), 20U);
  EXPECT_EQ(s40.layers()[1].swaps.size(), 19U);
  EXPECT_EQ(s40.depth(), 38U);
  for (std::size_t j = 0; j < s40.depth(); ++j) {
    EXPECT_EQ(s40.order()[j], j % 2 == 0 ? 1U : 2U);
  }
}

TEST(LineSwapStrategy, RejectsTooSmall) { EXPECT_THROW(lineSwapStrategy(1), InvalidArgument); }

TEST(SwapStrategy, ValidatesLayers) {
  const auto line = lineCouplingMap(4);
  EXPECT_THROW(SwapStrategy(line, {SwapLayer{{Edge(0, 2)}}}, {1}), InvalidArgument);
  EXPECT_THROW(SwapStrategy(line, {SwapLayer{{Edge(0, 1), Edge(1, 2)}}}, {1}),
               InvalidArgument);
  EXPECT_THROW(SwapStrategy(line, {SwapLayer{{Edge(0, 1)}}}, {2}), InvalidArgument);
  EXPECT_THROW(SwapStrategy(line, {SwapLayer{{Edge(0, 1)}}}, {0}), InvalidArgument);
}

TEST(PermutationAfter, IdentityAtZero) {
  const auto s = lineSwapStrategy(7);
  std::vector<Node> identity(7);
  std::iota(identity.begin(), identity.end(), Node{0});
  EXPECT_EQ(permutationAfter(s, 0), identity);
}

TEST(PermutationAfter, LineFourByHand) {
  const auto s = lineSwapStrategy(4);
  EXPECT_EQ(permutationAfter(s, 1), (std::vector<Node>{1, 0, 3, 2}));
  // qubit from 0 ends on 2, from 1 on 0, from 2 on 3, from 3 on 1
  EXPECT_EQ(permutationAfter(s, 2), (std::vector<Node>{2, 0, 3, 1}));
  // read the other way round: which starting label sits on each position
  EXPECT_EQ(occupantsAfter(s, 2), (std::vector<Node>{1, 3, 0, 2}));
}

TEST(PermutationAfter, OutOfRange) {
  const auto s = lineSwapStrategy(4);
  EXPECT_THROW(permutationAfter(s, 3), InvalidArgument);
  EXPECT_THROW(connectivityGraph(s, 3), InvalidArgument);
}

TEST(PermutationAfter, AlwaysABijection) {
  const auto s = lineSwapStrategy(23);
  for (std::size_t l = 0; l <= s.depth(); ++l) {
    auto p = permutationAfter(s, l);
    std::sort(p.begin(), p.end());
    for (Node i = 0; i < p.size(); ++i) {
      ASSERT_EQ(p[i], i) << "l=" << l;
    }
  }
}

TEST(ConnectivityGraph, ZeroLayersIsCoupling) {
  const auto s = lineSwapStrategy(10);
  const auto c0 = connectivityGraph(s, 0);
  EXPECT_EQ(c0.graph, s.coupling());
  EXPECT_EQ(c0.depth, 0U);
}

TEST(ConnectivityGraph, FirstLayerOnTenQubits) {
  const auto s = lineSwapStrategy(10);
  const auto c1 = connectivityGraph(s, 1);
  std::vector<Edge> added;
  for (const auto& e : c1.graph.edges()) {
    if (!s.coupling().hasEdge(e.u, e.v)) {
      added.push_back(e);
    }
  }
  EXPECT_EQ(added, (std::vector<Edge>{Edge(0, 3), Edge(2, 5), Edge(4, 7), Edge(6, 9)}));
}

TEST(ConnectivityGraph, FirstLayerOnFourQubits) {
  const auto s = lineSwapStrategy(4);
  const auto c1 = connectivityGraph(s, 1);
  EXPECT_EQ(c1.graph.numEdges(), 4U);
  EXPECT_TRUE(c1.graph.hasEdge(0, 3));
}

TEST(ConnectivityGraph, MatchesTokenSimulation) {
  for (int n = 2; n <= 17; ++n) {
    const auto s = lineSwapStrategy(static_cast<std::size_t>(n));
    for (int l = 0; l <= n - 2; ++l) {
      const auto expected = ref::lineTokenContacts(n, l);
      const auto c = connectivityGraph(s, static_cast<std::size_t>(l));
      std::set<std::pair<int, int>> got;
      for (const auto& e : c.graph.edges()) {
        got.insert({static_cast<int>(e.u), static_cast<int>(e.v)});
      }
      ASSERT_EQ(got, expected) << "n=" << n << " l=" << l;
    }
  }
}

TEST(ConnectivityGraph, MonotoneAndComplete) {
  for (std::size_t n = 3; n <= 40; ++n) {
    const auto s = lineSwapStrategy(n);
    for (std::size_t l = 0; l < s.depth(); ++l) {
      const auto a = connectivityGraph(s, l);
      const auto b = connectivityGraph(s, l + 1);
      for (const auto& e : a.graph.edges()) {
        ASSERT_TRUE(b.graph.hasEdge(e.u, e.v));
      }
    }
    EXPECT_TRUE(connectivityGraph(s, n - 2).graph.isComplete()) << n;
    if (n > 3) {
      EXPECT_FALSE(connectivityGraph(s, n - 3).graph.isComplete()) << n;
    }
  }
}

TEST(ConnectivityGraph, FirstContactAgreesWithGraphs) {
  const auto s = lineSwapStrategy(12);
  const auto first = firstContactDepth(s);
  for (std::size_t l = 0; l <= s.depth(); ++l) {
    const auto c = connectivityGraph(s, l);
    for (Node i = 0; i < 12; ++i) {
      for (Node j = i + 1; j < 12; ++j) {
        EXPECT_EQ(c.graph.hasEdge(i, j), first[i][j] >= 0 && first[i][j] <= static_cast<int>(l));
      }
    }
  }
}

TEST(StrategyIo, RoundTripAndValidation) {
  const auto s = lineSwapStrategy(6);
  const auto text = io::strategyToJson(s).dump();
  EXPECT_EQ(io::strategyFromJson(io::Json::parse(text)), s);
  EXPECT_THROW(io::strategyFromJson(io::Json::parse(
                   R"({"coupling":{"num_nodes":3,"edges":[[0,1],[1,2]]},"layers":[[[0,2]]],"order":[1]})")),
               ParseError);
  EXPECT_THROW(io::strategyFromJson(io::Json::parse(
                   R"({"coupling":{"num_nodes":3,"edges":[[0,1],[1,2]]},"layers":[[[0,1]]]})")),
               ParseError);
}

TEST(StrategyIo, CustomRingStrategy) {
  // a 4-ring with one layer reaches K4 after a single swap layer
  const auto s = io::strategyFromJson(io::Json::parse(
      R"({"coupling":{"num_nodes":4,"edges":[[0,1],[1,2],[2,3],[0,3]]},"layers":[[[0,1]]],"order":[1]})"));
  EXPECT_FALSE(connectivityGraph(s, 0).graph.isComplete());
  EXPECT_TRUE(connectivityGraph(s, 1).graph.isComplete());
}
