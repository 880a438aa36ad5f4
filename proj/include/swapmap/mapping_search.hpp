#pragma once

#include "swapmap/error.hpp"
#include "swapmap/graph.hpp"
#include "swapmap/mapping.hpp"
#include "swapmap/random.hpp"
#include "swapmap/router.hpp"
#include "swapmap/sat_encoding.hpp"
#include "swapmap/solver.hpp"
#include "swapmap/swap_strategy.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace swapmap {

/// One SAT instance decided during a search.
struct TraceEntry {
  std::size_t l = 0;
  SolveStatus status = SolveStatus::Timeout;
  double seconds = 0.0;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct SearchResult {
  /// Smallest depth with a certified embedding (an upper bound when
  /// timeouts were treated as unsatisfiable).
  std::size_t lMin = 0;
  Mapping mapping;
  std::vector<TraceEntry> trace;
  std::size_t solverCalls = 0;
};

/// No depth produced a certificate; carries everything that was tried.
class InfeasibleWithTrace : public Infeasible {
public:
  InfeasibleWithTrace(std::string what, std::vector<TraceEntry> trace)
      : Infeasible(std::move(what)), trace_(std::move(trace)) {}
  [[nodiscard]] const std::vector<TraceEntry>& trace() const noexcept { return trace_; }

private:
  std::vector<TraceEntry> trace_;
};

/// Outcome of deciding a single depth: the status and, on SAT, the placement.
struct DepthAttempt {
  SolveStatus status = SolveStatus::Timeout;
  std::optional<Mapping> mapping;
  double seconds = 0.0;
};

using DepthOracle = std::function<DepthAttempt(std::size_t l)>;

/**
 * Binary search for the smallest satisfiable depth in [lo, hi].
 *
 * A TIMEOUT moves the lower bound up exactly like UNSAT. When the loop ends
 * without any SAT certificate the final upper bound is decided once more so
 * that feasible inputs always come back with a placement.
 */
inline SearchResult binarySearchDepth(std::size_t lo, std::size_t hi,
                                      const DepthOracle& decide) {
  SearchResult result;
  std::optional<std::pair<std::size_t, Mapping>> best;
  auto attempt = [&](std::size_t l) {
    auto a = decide(l);
    ++result.solverCalls;
    result.trace.push_back({l, a.status, a.seconds});
    return a;
  };
  while (lo < hi) {
    const std::size_t l = lo + (hi - lo) / 2;
    auto a = attempt(l);
    if (a.status == SolveStatus::Sat) {
      hi = l;
      best.emplace(l, std::move(*a.mapping));
    } else {
      lo = l + 1;
    }
  }
  if (!best) {
    auto a = attempt(hi);
    if (a.status != SolveStatus::Sat) {
      throw InfeasibleWithTrace("no embedding certified up to depth " + std::to_string(hi),
                                std::move(result.trace));
    }
    best.emplace(hi, std::move(*a.mapping));
  }
  result.lMin = best->first;
  result.mapping = std::move(best->second);
  return result;
}

/// Caches C_l per depth for one strategy.
class ConnectivityCache {
public:
  explicit ConnectivityCache(const SwapStrategy& strategy) : strategy_(strategy) {}

  const ConnectivityGraph& at(std::size_t l) {
    auto it = cache_.find(l);
    if (it == cache_.end()) {
      it = cache_.emplace(l, connectivityGraph(strategy_, l)).first;
    }
    return it->second;
  }

private:
  const SwapStrategy& strategy_;
  std::map<std::size_t, ConnectivityGraph> cache_;
};

/// Encodes P into C_l, solves, and decodes (verifying every edge) on SAT.
inline DepthAttempt decideWholeGraph(const ProgramGraph& program, const Graph& target,
                                     SolveBudget budget, const SatBackend& backend) {
  const auto enc = encodeEmbedding(program, target);
  const auto outcome = backend(enc.formula, budget);
  DepthAttempt a{outcome.status, std::nullopt, outcome.elapsed};
  if (outcome.status == SolveStatus::Sat) {
    auto m = decodeModel(*outcome.model, enc.vars);
    if (!preservesEdges(program, target, m)) {
      throw InconsistentModel("decoded mapping breaks a program edge");
    }
    a.mapping = std::move(m);
  }
  return a;
}

/**
 * Smallest-depth placement search over the strategy's connectivity graphs.
 *
 * Decides O(log L) SAT instances; each gets its own `budget`, and a timeout
 * counts as unsatisfiable.
 */
inline SearchResult binarySearchMapping(const ProgramGraph& program,
                                        const SwapStrategy& strategy,
                                        SolveBudget budget = {},
                                        const SatBackend& backend = builtinBackend()) {
  if (program.numNodes() > strategy.numQubits()) {
    throw Infeasible("program has " + std::to_string(program.numNodes()) +
                     " nodes, device only " + std::to_string(strategy.numQubits()));
  }
  ConnectivityCache cache(strategy);
  return binarySearchDepth(0, strategy.depth(), [&](std::size_t l) {
    return decideWholeGraph(program, cache.at(l).graph, budget, backend);
  });
}

/// Decides every depth 0..L in order (the data behind easy-hard-easy plots).
inline std::vector<TraceEntry> linearScanTrace(const ProgramGraph& program,
                                               const SwapStrategy& strategy,
                                               SolveBudget budget = {},
                                               const SatBackend& backend = builtinBackend()) {
  std::vector<TraceEntry> trace;
  for (std::size_t l = 0; l <= strategy.depth(); ++l) {
    const auto target = connectivityGraph(strategy, l);
    const auto a = decideWholeGraph(program, target.graph, budget, backend);
    trace.push_back({l, a.status, a.seconds});
  }
  return trace;
}

/// Program node i on physical qubit i.
inline Mapping trivialMapping(const ProgramGraph& program, const SwapStrategy& strategy) {
  if (program.numNodes() > strategy.numQubits()) {
    throw Infeasible("program larger than device");
  }
  return identityMapping(program.numNodes());
}

struct RandomMappingResult {
  Mapping mapping;
  std::size_t layersUsed = 0;
  std::size_t bestTrial = 0;
};

/// Best of `trials` uniformly random placements by routed swap-layer count;
/// ties go to the earliest trial.
inline RandomMappingResult bestRandomMapping(const ProgramGraph& program,
                                             const SwapStrategy& strategy,
                                             std::size_t trials, RngSeed seed) {
  if (trials < 1) {
    throw InvalidArgument("need at least one random trial");
  }
  if (program.numNodes() > strategy.numQubits()) {
    throw Infeasible("program larger than device");
  }
  Rng rng(seed);
  std::optional<RandomMappingResult> best;
  std::vector<Node> qubits(strategy.numQubits());
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t q = 0; q < qubits.size(); ++q) {
      qubits[q] = static_cast<Node>(q);
    }
    rng.shuffle(qubits);
    Mapping m;
    m.assignment.assign(qubits.begin(), qubits.begin() + static_cast<std::ptrdiff_t>(program.numNodes()));
    const auto layers = route(program, strategy, m).swapLayersUsed;
    if (!best || layers < best->layersUsed) {
      best = RandomMappingResult{std::move(m), layers, t};
    }
  }
  return *best;
}

} // namespace swapmap
