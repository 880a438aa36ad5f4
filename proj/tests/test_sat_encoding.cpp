#include "oracles.hpp"

#include "swapmap/random.hpp"
#include "swapmap/sat_encoding.hpp"
#include "swapmap/solver.hpp"
#include "swapmap/swap_strategy.hpp"

#include <gtest/gtest.h>

using namespace swapmap;

namespace {

std::size_t expectedClauses(const Graph& p, std::size_t m) {
  const auto n = p.numNodes();
  return n + n * m * (m - 1) / 2 + m * n * (n - 1) / 2 + p.numEdges() * m;
}

// brute-force model count, small formulas only
std::size_t countModels(const CnfFormula& f) {
  std::size_t count = 0;
  const auto n = f.numVars();
  for (std::uint64_t a = 0; a < (1ULL << n); ++a) {
    Model m(n + 1);
    for (std::size_t v = 1; v <= n; ++v) {
      m[v] = ((a >> (v - 1)) & 1ULL) != 0;
    }
    count += f.satisfiedBy(m) ? 1 : 0;
  }
  return count;
}

} // namespace

TEST(EncodeEmbedding, TriangleOnTriangle) {
  const auto enc = encodeEmbedding(completeGraph(3), completeGraph(3));
  EXPECT_EQ(enc.formula.numVars(), 9U);
  EXPECT_EQ(enc.formula.numClauses(), 30U);
  EXPECT_EQ(toDimacs(enc.formula).substr(0, 11), "p cnf 9 30\n");
  EXPECT_EQ(countModels(enc.formula), 6U);
}

TEST(EncodeEmbedding, VariableNumbering) {
  const auto enc = encodeEmbedding(pathGraph(3), lineCouplingMap(5));
  EXPECT_EQ(enc.vars.var(0, 0), 1);
  EXPECT_EQ(enc.vars.var(1, 0), 6);
  EXPECT_EQ(enc.vars.var(2, 4), 15);
  EXPECT_EQ(enc.vars.slotOf(7), (std::pair<std::size_t, std::size_t>{1, 1}));
}

TEST(EncodeEmbedding, ClauseOrderIsFixed) {
  const auto enc = encodeEmbedding(pathGraph(2), lineCouplingMap(2));
  const auto& f = enc.formula;
  ASSERT_EQ(f.numClauses(), 2U + 2U + 2U + 2U);
  auto lits = [&](std::size_t i) {
    const auto c = f.clause(i);
    return std::vector<Literal>(c.begin(), c.end());
  };
  EXPECT_EQ(lits(0), (std::vector<Literal>{1, 2}));
  EXPECT_EQ(lits(1), (std::vector<Literal>{3, 4}));
  EXPECT_EQ(lits(2), (std::vector<Literal>{-2, -1}));
  EXPECT_EQ(lits(3), (std::vector<Literal>{-4, -3}));
  EXPECT_EQ(lits(4), (std::vector<Literal>{-3, -1}));
  EXPECT_EQ(lits(5), (std::vector<Literal>{-4, -2}));
  EXPECT_EQ(lits(6), (std::vector<Literal>{-1, 4}));
  EXPECT_EQ(lits(7), (std::vector<Literal>{-2, 3}));
}

TEST(EncodeEmbedding, EdgeOnEdgeHasTwoModels) {
  const auto enc = encodeEmbedding(pathGraph(2), lineCouplingMap(2));
  EXPECT_EQ(countModels(enc.formula), 2U);
}

TEST(EncodeEmbedding, TriangleOnPathIsUnsat) {
  const auto enc = encodeEmbedding(completeGraph(3), pathGraph(3));
  EXPECT_FALSE(ref::truthTableModel(enc.formula).has_value());
}

TEST(EncodeEmbedding, TooLargeProgramIsInfeasible) {
  EXPECT_THROW(encodeEmbedding(completeGraph(4), completeGraph(3)), Infeasible);
}

TEST(EncodeEmbedding, ClauseCountFormula) {
  Rng rng(RngSeed{5});
  for (int trial = 0; trial < 60; ++trial) {
    const auto m = 2 + rng.below(14);
    const auto n = 1 + rng.below(m);
    const auto p = gnpGraph(n, 0.3, {rng.below(1000)});
    const auto s = lineSwapStrategy(m);
    const auto c = connectivityGraph(s, rng.below(s.depth() + 1));
    const auto enc = encodeEmbedding(p, c);
    EXPECT_EQ(enc.formula.numClauses(), expectedClauses(p, m));
    EXPECT_EQ(enc.formula.numVars(), n * m);
  }
}

TEST(EncodeEmbedding, PinsFixPlacement) {
  const PinSet pins{{0, 2}};
  const auto enc = encodeEmbedding(pathGraph(2), lineCouplingMap(3), pins);
  // base clauses, one unit pin, one negative unit for node 1 on qubit 2
  EXPECT_EQ(enc.formula.numClauses(), expectedClauses(pathGraph(2), 3) + 2);
  const auto out = solve(enc.formula);
  ASSERT_EQ(out.status, SolveStatus::Sat);
  const auto m = decodeModel(*out.model, enc.vars);
  EXPECT_EQ(m.assignment, (std::vector<Node>{2, 1}));
}

TEST(EncodeEmbedding, BadPinsRejected) {
  EXPECT_THROW(encodeEmbedding(pathGraph(2), lineCouplingMap(3), PinSet{{0, 3}}),
               InvalidArgument);
  EXPECT_THROW(encodeEmbedding(pathGraph(2), lineCouplingMap(3), PinSet{{0, 1}, {1, 1}}),
               InvalidArgument);
  EXPECT_THROW(encodeEmbedding(pathGraph(2), lineCouplingMap(3), PinSet{{5, 1}}),
               InvalidArgument);
}

TEST(DecodeModel, RoundTrip) {
  const auto enc = encodeEmbedding(completeGraph(3), completeGraph(4));
  Model m(enc.formula.numVars() + 1, false);
  m[static_cast<std::size_t>(enc.vars.var(0, 3))] = true;
  m[static_cast<std::size_t>(enc.vars.var(1, 0))] = true;
  m[static_cast<std::size_t>(enc.vars.var(2, 2))] = true;
  EXPECT_EQ(decodeModel(m, enc.vars).assignment, (std::vector<Node>{3, 0, 2}));
}

TEST(DecodeModel, InconsistentModels) {
  const auto enc = encodeEmbedding(pathGraph(2), lineCouplingMap(3));
  Model none(enc.formula.numVars() + 1, false);
  none[1] = true;
  EXPECT_THROW(decodeModel(none, enc.vars), InconsistentModel);
  Model twice(enc.formula.numVars() + 1, false);
  twice[1] = twice[2] = true;
  twice[5] = true;
  EXPECT_THROW(decodeModel(twice, enc.vars), InconsistentModel);
  Model clash(enc.formula.numVars() + 1, false);
  clash[enc.vars.var(0, 1)] = true;
  clash[enc.vars.var(1, 1)] = true;
  EXPECT_THROW(decodeModel(clash, enc.vars), InconsistentModel);
}

TEST(EncodeSubproblem, ActiveNodesOnly) {
  // path 0-1-2-3; nodes 0,1 pinned on 0,1, nodes 2,3 placed on a line of 6
  const auto p = pathGraph(4);
  const PinSet pins{{0, 0}, {1, 1}};
  const std::vector<Node> active{2, 3};
  const auto enc = encodeSubproblem(p, active, lineCouplingMap(6), pins);
  EXPECT_EQ(enc.vars.numProgram, 2U);
  EXPECT_EQ(enc.vars.nodes, active);
  const auto out = solve(enc.formula);
  ASSERT_EQ(out.status, SolveStatus::Sat);
  const auto m = decodeModel(*out.model, enc.vars);
  EXPECT_EQ(m.assignment, (std::vector<Node>{2, 3}));
}

TEST(EncodeSubproblem, CrossEdgeCanFail) {
  // node 1 must sit next to qubit 0, whose only free neighbour is taken
  const auto p = pathGraph(3);
  const PinSet pins{{0, 0}, {2, 1}};
  const auto enc = encodeSubproblem(p, std::vector<Node>{1}, lineCouplingMap(4), pins);
  EXPECT_EQ(solve(enc.formula).status, SolveStatus::Unsat);
}

TEST(VarMapJson, Shape) {
  const auto enc = encodeEmbedding(pathGraph(2), lineCouplingMap(3));
  const auto text = varMapJson(enc.vars);
  EXPECT_NE(text.find("\"num_program\": 2"), std::string::npos) << text;
}
