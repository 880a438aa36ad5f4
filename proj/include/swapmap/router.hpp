#pragma once

#include "swapmap/error.hpp"
#include "swapmap/graph.hpp"
#include "swapmap/mapping.hpp"
#include "swapmap/swap_strategy.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace swapmap {

/// Routing ran out of swap layers; `unapplied` lists the leftover program edges.
class RoutingIncomplete : public Error {
public:
  RoutingIncomplete(std::string what, std::vector<Edge> unapplied)
      : Error(std::move(what)), unapplied_(std::move(unapplied)) {}
  [[nodiscard]] const std::vector<Edge>& unapplied() const noexcept { return unapplied_; }

private:
  std::vector<Edge> unapplied_;
};

/**
 * One time step of the routed circuit.
 *
 * Gate rounds list program edges (program-node pairs); each stands for a
 * ZZ-type gate with an opaque angle theta_{u,v}. Swap rounds list physical
 * qubit pairs. `layerIndex` is the 1-based position in the strategy order
 * for swap rounds and 0 for gate rounds.
 */
struct Round {
  enum class Kind { Gates, Swaps };
  Kind kind = Kind::Gates;
  std::vector<Edge> pairs;
  std::size_t layerIndex = 0;

  friend bool operator==(const Round&, const Round&) = default;
};

struct RoutedCircuit {
  std::vector<Round> rounds;
  std::size_t swapLayersUsed = 0;
  std::size_t swapsApplied = 0;
  /// Three CNOTs per SWAP; program gates are not counted.
  std::size_t cnotCount = 0;
  std::size_t programGateCount = 0;
  bool trimmed = false;
};

struct RouteOptions {
  bool trimDeadSwaps = false;
};

namespace detail {

// Splits feasible edges into rounds of disjoint edges: each round is a
// greedy maximal matching over what is left, in canonical edge order.
inline std::vector<std::vector<Edge>> packIntoMatchings(std::vector<Edge> edges,
                                                        std::size_t numNodes) {
  std::vector<std::vector<Edge>> rounds;
  std::vector<std::size_t> busy(numNodes, 0);
  std::size_t stamp = 0;
  while (!edges.empty()) {
    ++stamp;
    std::vector<Edge> round;
    std::vector<Edge> rest;
    for (const auto& e : edges) {
      if (busy[e.u] != stamp && busy[e.v] != stamp) {
        busy[e.u] = busy[e.v] = stamp;
        round.push_back(e);
      } else {
        rest.push_back(e);
      }
    }
    rounds.push_back(std::move(round));
    edges = std::move(rest);
  }
  return rounds;
}

inline void trimDeadSwaps(RoutedCircuit& circuit, const Mapping& mapping,
                          std::size_t numQubits) {
  // physical location of every gate, replayed forward
  std::vector<std::vector<Edge>> gatePositions(circuit.rounds.size());
  std::vector<Node> position(mapping.assignment.begin(), mapping.assignment.end());
  std::vector<std::optional<Node>> occupant(numQubits);
  for (std::size_t i = 0; i < position.size(); ++i) {
    occupant[position[i]] = static_cast<Node>(i);
  }
  for (std::size_t r = 0; r < circuit.rounds.size(); ++r) {
    const auto& round = circuit.rounds[r];
    if (round.kind == Round::Kind::Gates) {
      for (const auto& e : round.pairs) {
        gatePositions[r].emplace_back(position[e.u], position[e.v]);
      }
    } else {
      for (const auto& s : round.pairs) {
        std::swap(occupant[s.u], occupant[s.v]);
        if (occupant[s.u]) {
          position[*occupant[s.u]] = s.u;
        }
        if (occupant[s.v]) {
          position[*occupant[s.v]] = s.v;
        }
      }
    }
  }
  std::vector<bool> needed(numQubits, false);
  for (std::size_t r = circuit.rounds.size(); r-- > 0;) {
    auto& round = circuit.rounds[r];
    if (round.kind == Round::Kind::Gates) {
      for (const auto& e : gatePositions[r]) {
        needed[e.u] = needed[e.v] = true;
      }
      continue;
    }
    std::vector<Edge> live;
    for (const auto& s : round.pairs) {
      if (needed[s.u] || needed[s.v]) {
        live.push_back(s);
      }
    }
    for (const auto& s : live) {
      needed[s.u] = needed[s.v] = true;
    }
    round.pairs = std::move(live);
  }
  circuit.trimmed = true;
}

} // namespace detail

/**
 * Executes the program under the swap strategy from the given placement.
 *
 * At every depth all pending program edges whose qubits are adjacent on the
 * coupling map are applied (packed into rounds of disjoint gates); then the
 * next swap layer of the strategy is applied. Stops as soon as every edge
 * has been applied. Throws RoutingIncomplete if the strategy runs out.
 */
inline RoutedCircuit route(const ProgramGraph& program, const SwapStrategy& strategy,
                           const Mapping& mapping, RouteOptions options = {}) {
  const auto n = strategy.numQubits();
  mapping.validate(program.numNodes(), n);
  const auto& coupling = strategy.coupling();

  std::vector<Node> position(mapping.assignment.begin(), mapping.assignment.end());
  std::vector<std::optional<Node>> occupant(n);
  for (std::size_t i = 0; i < position.size(); ++i) {
    occupant[position[i]] = static_cast<Node>(i);
  }

  RoutedCircuit circuit;
  std::vector<Edge> pending = program.edges();
  for (std::size_t t = 0;; ++t) {
    std::vector<Edge> feasible;
    std::vector<Edge> remaining;
    for (const auto& e : pending) {
      (coupling.hasEdge(position[e.u], position[e.v]) ? feasible : remaining).push_back(e);
    }
    for (auto& round : detail::packIntoMatchings(std::move(feasible), program.numNodes())) {
      circuit.programGateCount += round.size();
      circuit.rounds.push_back({Round::Kind::Gates, std::move(round), 0});
    }
    pending = std::move(remaining);
    if (pending.empty()) {
      break;
    }
    if (t == strategy.depth()) {
      throw RoutingIncomplete(std::to_string(pending.size()) +
                                  " program edges remain after all " +
                                  std::to_string(strategy.depth()) + " swap layers",
                              std::move(pending));
    }
    const auto& layer = strategy.appliedLayer(t + 1);
    for (const auto& s : layer.swaps) {
      std::swap(occupant[s.u], occupant[s.v]);
      if (occupant[s.u]) {
        position[*occupant[s.u]] = s.u;
      }
      if (occupant[s.v]) {
        position[*occupant[s.v]] = s.v;
      }
    }
    circuit.rounds.push_back({Round::Kind::Swaps, layer.swaps, t + 1});
    ++circuit.swapLayersUsed;
  }

  if (options.trimDeadSwaps) {
    detail::trimDeadSwaps(circuit, mapping, n);
  }
  for (const auto& round : circuit.rounds) {
    if (round.kind == Round::Kind::Swaps) {
      circuit.swapsApplied += round.pairs.size();
    }
  }
  circuit.cnotCount = 3 * circuit.swapsApplied;
  return circuit;
}

/// Swap layers needed by `mapping`, without building the circuit.
inline std::size_t swapLayersNeeded(const ProgramGraph& program,
                                    const std::vector<std::vector<int>>& firstContact,
                                    const Mapping& mapping) {
  int worst = 0;
  for (const auto& e : program.edges()) {
    const int d = firstContact[mapping[e.u]][mapping[e.v]];
    if (d < 0) {
      throw RoutingIncomplete("edge never becomes adjacent", {e});
    }
    worst = std::max(worst, d);
  }
  return static_cast<std::size_t>(worst);
}

struct VerificationReport {
  bool passed = true;
  std::string violation;
  std::optional<std::size_t> round;

  explicit operator bool() const noexcept { return passed; }
};

/**
 * Replays `circuit` from `mapping` and checks it independently of route():
 * every gate acts on qubits adjacent on the coupling map at that moment,
 * every program edge is applied exactly once, gates within a round are
 * disjoint, and swap rounds follow the strategy order (a subset of the
 * strategy layer when the circuit was trimmed, the whole layer otherwise).
 */
inline VerificationReport verifyRouting(const RoutedCircuit& circuit,
                                        const ProgramGraph& program,
                                        const SwapStrategy& strategy,
                                        const Mapping& mapping) {
  auto fail = [](std::string why, std::optional<std::size_t> r = std::nullopt) {
    return VerificationReport{false, std::move(why), r};
  };
  const auto n = strategy.numQubits();
  try {
    mapping.validate(program.numNodes(), n);
  } catch (const Error& e) {
    return fail(std::string("invalid mapping: ") + e.what());
  }

  std::vector<Node> position(mapping.assignment.begin(), mapping.assignment.end());
  std::vector<std::optional<Node>> occupant(n);
  for (std::size_t i = 0; i < position.size(); ++i) {
    occupant[position[i]] = static_cast<Node>(i);
  }
  std::vector<std::size_t> applied(program.numEdges(), 0);
  auto edgeIndex = [&program](const Edge& e) -> std::optional<std::size_t> {
    const auto& edges = program.edges();
    const auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - edges.begin());
  };

  std::size_t nextLayer = 1;
  for (std::size_t r = 0; r < circuit.rounds.size(); ++r) {
    const auto& round = circuit.rounds[r];
    if (round.kind == Round::Kind::Gates) {
      std::vector<bool> busy(program.numNodes(), false);
      for (const auto& e : round.pairs) {
        if (e.v >= program.numNodes()) {
          return fail("gate on unknown program node", r);
        }
        const auto idx = edgeIndex(e);
        if (!idx) {
          return fail("gate (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                          ") is not a program edge",
                      r);
        }
        if (busy[e.u] || busy[e.v]) {
          return fail("gates in one round share a qubit", r);
        }
        busy[e.u] = busy[e.v] = true;
        if (!strategy.coupling().hasEdge(position[e.u], position[e.v])) {
          return fail("adjacency violation: gate (" + std::to_string(e.u) + "," +
                          std::to_string(e.v) + ") on non-adjacent qubits " +
                          std::to_string(position[e.u]) + "," +
                          std::to_string(position[e.v]),
                      r);
        }
        if (++applied[*idx] > 1) {
          return fail("coverage violation: edge (" + std::to_string(e.u) + "," +
                          std::to_string(e.v) + ") applied twice",
                      r);
        }
      }
      continue;
    }
    if (nextLayer > strategy.depth() || round.layerIndex != nextLayer) {
      return fail("swap round out of strategy order", r);
    }
    const auto& expected = strategy.appliedLayer(nextLayer).swaps;
    ++nextLayer;
    if (!circuit.trimmed && round.pairs != expected) {
      return fail("swap round differs from strategy layer", r);
    }
    for (const auto& s : round.pairs) {
      if (std::find(expected.begin(), expected.end(), s) == expected.end()) {
        return fail("swap (" + std::to_string(s.u) + "," + std::to_string(s.v) +
                        ") is not in the strategy layer",
                    r);
      }
      std::swap(occupant[s.u], occupant[s.v]);
      if (occupant[s.u]) {
        position[*occupant[s.u]] = s.u;
      }
      if (occupant[s.v]) {
        position[*occupant[s.v]] = s.v;
      }
    }
  }
  for (std::size_t i = 0; i < applied.size(); ++i) {
    if (applied[i] == 0) {
      const auto& e = program.edges()[i];
      return fail("coverage violation: edge (" + std::to_string(e.u) + "," +
                  std::to_string(e.v) + ") never applied");
    }
  }
  return {};
}

} // namespace swapmap
