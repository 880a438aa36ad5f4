#include "swapmap/mapping_search.hpp"
#include "swapmap/oracle.hpp"
#include "swapmap/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace swapmap;

namespace {

std::size_t callBound(std::size_t depth) {
  return static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(depth + 1)))) + 1;
}

} // namespace

TEST(BinarySearchDepth, FindsThreshold) {
  for (std::size_t hi = 0; hi <= 40; ++hi) {
    for (std::size_t threshold = 0; threshold <= hi; ++threshold) {
      std::size_t calls = 0;
      const auto r = binarySearchDepth(0, hi, [&](std::size_t l) {
        ++calls;
        DepthAttempt a;
        a.status = l >= threshold ? SolveStatus::Sat : SolveStatus::Unsat;
        if (a.status == SolveStatus::Sat) {
          a.mapping = Mapping{{static_cast<Node>(l)}};
        }
        return a;
      });
      ASSERT_EQ(r.lMin, threshold);
      EXPECT_EQ(r.mapping.assignment, std::vector<Node>{static_cast<Node>(threshold)});
      EXPECT_EQ(r.solverCalls, calls);
      EXPECT_EQ(r.trace.size(), calls);
      EXPECT_LE(calls, callBound(hi)) << "hi=" << hi << " threshold=" << threshold;
    }
  }
}

TEST(BinarySearchDepth, TimeoutCountsAsUnsat) {
  // l = 3..5 time out, SAT from 6
  const auto r = binarySearchDepth(0, 10, [](std::size_t l) {
    DepthAttempt a;
    if (l >= 6) {
      a.status = SolveStatus::Sat;
      a.mapping = Mapping{{0}};
    } else if (l >= 3) {
      a.status = SolveStatus::Timeout;
    } else {
      a.status = SolveStatus::Unsat;
    }
    return a;
  });
  EXPECT_EQ(r.lMin, 6U);
}

TEST(BinarySearchDepth, NothingSatisfiable) {
  try {
    binarySearchDepth(0, 7, [](std::size_t) { return DepthAttempt{SolveStatus::Timeout, {}, 0}; });
    FAIL() << "expected InfeasibleWithTrace";
  } catch (const InfeasibleWithTrace& e) {
    EXPECT_FALSE(e.trace().empty());
    EXPECT_EQ(e.trace().back().l, 7U);
  }
}

TEST(BinarySearchMapping, PathIsZero) {
  const auto r = binarySearchMapping(pathGraph(10), lineSwapStrategy(10));
  EXPECT_EQ(r.lMin, 0U);
  EXPECT_TRUE(preservesEdges(pathGraph(10), lineCouplingMap(10), r.mapping));
}

TEST(BinarySearchMapping, TriangleOnLineNeedsOneLayer) {
  const auto r = binarySearchMapping(completeGraph(3), lineSwapStrategy(3));
  EXPECT_EQ(r.lMin, 1U);
  EXPECT_LE(r.solverCalls, callBound(1));
}

TEST(BinarySearchMapping, ProgramTooLarge) {
  EXPECT_THROW(binarySearchMapping(pathGraph(5), lineSwapStrategy(4)), Infeasible);
}

TEST(BinarySearchMapping, AgreesWithOracleScan) {
  Rng rng(RngSeed{31});
  for (int trial = 0; trial < 25; ++trial) {
    const auto n = 4 + rng.below(8);
    const auto p = rng.below(2) == 0 && n % 2 == 0 ? randomRegularGraph(n, 3, {rng.below(1000)})
                                                   : gnpGraph(n, 0.3, {rng.below(1000)});
    const auto s = lineSwapStrategy(n);
    const auto r = binarySearchMapping(p, s);
    EXPECT_EQ(r.lMin, exactLminScan(p, s)) << "trial " << trial;
    EXPECT_LE(r.solverCalls, callBound(s.depth()));
    const auto c = route(p, s, r.mapping);
    EXPECT_EQ(c.swapLayersUsed, r.lMin);
    EXPECT_TRUE(verifyRouting(c, p, s, r.mapping));
  }
}

TEST(LinearScanTrace, MonotoneStatuses) {
  const auto p = randomRegularGraph(10, 3, {4});
  const auto s = lineSwapStrategy(10);
  const auto trace = linearScanTrace(p, s);
  ASSERT_EQ(trace.size(), s.depth() + 1);
  bool seenSat = false;
  for (const auto& t : trace) {
    if (seenSat) {
      EXPECT_EQ(t.status, SolveStatus::Sat) << t.l;
    }
    seenSat = seenSat || t.status == SolveStatus::Sat;
  }
  EXPECT_TRUE(seenSat);
  EXPECT_EQ(trace.back().status, SolveStatus::Sat);
}

TEST(TrivialAndRandom, Baselines) {
  const auto p = randomRegularGraph(20, 3, {3});
  const auto s = lineSwapStrategy(20);
  EXPECT_EQ(trivialMapping(p, s).assignment, identityMapping(20).assignment);
  const auto a = bestRandomMapping(p, s, 30, {5});
  const auto b = bestRandomMapping(p, s, 30, {5});
  EXPECT_EQ(a.mapping.assignment, b.mapping.assignment);
  EXPECT_EQ(a.layersUsed, route(p, s, a.mapping).swapLayersUsed);
  const auto one = bestRandomMapping(p, s, 1, {5});
  EXPECT_LE(a.layersUsed, one.layersUsed);
  EXPECT_THROW(bestRandomMapping(p, s, 0, {5}), InvalidArgument);
}

TEST(BackendInjection, ExternalStyleBackendIsUsed) {
  std::size_t calls = 0;
  SatBackend counting = [&](const CnfFormula& f, SolveBudget b) {
    ++calls;
    return solve(f, b);
  };
  const auto r = binarySearchMapping(completeGraph(4), lineSwapStrategy(6), {}, counting);
  EXPECT_EQ(calls, r.solverCalls);
  EXPECT_EQ(r.lMin, exactLminScan(completeGraph(4), lineSwapStrategy(6)));
}
