#pragma once

#include "swapmap/cnf.hpp"
#include "swapmap/error.hpp"
#include "swapmap/graph.hpp"
#include "swapmap/mapping.hpp"
#include "swapmap/swap_strategy.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace swapmap {

/**
 * Layout of the placement variables x_{i,j} ("program slot i sits on
 * physical label j") in DIMACS numbering: var(i, j) = i * numPhysical + j + 1.
 *
 * `nodes[i]` is the program node behind slot i. For whole-graph encodings
 * it is the identity; for cluster subproblems it lists the active nodes.
 */
struct VarMap {
  std::size_t numProgram = 0;
  std::size_t numPhysical = 0;
  std::vector<Node> nodes;

  [[nodiscard]] Literal var(std::size_t slot, std::size_t physical) const {
    return static_cast<Literal>(slot * numPhysical + physical + 1);
  }
  [[nodiscard]] std::size_t numVars() const noexcept { return numProgram * numPhysical; }
  /// Inverse of var(): (slot, physical) for a variable in 1..numVars().
  [[nodiscard]] std::pair<std::size_t, std::size_t> slotOf(Literal v) const {
    const auto idx = static_cast<std::size_t>(v - 1);
    return {idx / numPhysical, idx % numPhysical};
  }
};

/// Program nodes that are already placed: program node -> physical label.
using PinSet = std::map<Node, Node>;

struct Encoding {
  CnfFormula formula;
  VarMap vars;
};

namespace detail {

inline void emitExactlyOne(CnfFormula& f, const VarMap& vm) {
  // at least one physical label per slot
  for (std::size_t i = 0; i < vm.numProgram; ++i) {
    for (std::size_t j = 0; j < vm.numPhysical; ++j) {
      f.push(vm.var(i, j));
    }
    f.closeClause();
  }
  // at most one physical label per slot
  for (std::size_t i = 0; i < vm.numProgram; ++i) {
    for (std::size_t j = 0; j < vm.numPhysical; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        f.addClause({-vm.var(i, j), -vm.var(i, k)});
      }
    }
  }
  // at most one slot per physical label
  for (std::size_t k = 0; k < vm.numPhysical; ++k) {
    for (std::size_t i = 0; i < vm.numProgram; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        f.addClause({-vm.var(i, k), -vm.var(j, k)});
      }
    }
  }
}

// x_{a,k} -> OR_{k' ~ k} x_{b,k'}
inline void emitAdjacency(CnfFormula& f, const VarMap& vm, const Graph& target,
                          std::size_t a, std::size_t b) {
  for (Node k = 0; k < vm.numPhysical; ++k) {
    f.push(-vm.var(a, k));
    for (auto kk : target.neighbors(k)) {
      f.push(vm.var(b, kk));
    }
    f.closeClause();
  }
}

inline std::vector<bool> validatePins(const PinSet& pins, std::size_t numProgram,
                                      std::size_t numPhysical) {
  std::vector<bool> occupied(numPhysical, false);
  for (const auto& [program, physical] : pins) {
    if (program >= numProgram || physical >= numPhysical) {
      throw InvalidArgument("pin " + std::to_string(program) + "->" +
                            std::to_string(physical) + " is out of range");
    }
    if (occupied[physical]) {
      throw InvalidArgument("pins are not injective: physical qubit " +
                            std::to_string(physical) + " used twice");
    }
    occupied[physical] = true;
  }
  return occupied;
}

} // namespace detail

/**
 * CNF whose models are exactly the injective placements of `program` on the
 * labels of `target` that map every program edge onto a target edge.
 *
 * Clause order (fixed, so DIMACS output is reproducible):
 *   1. one "at least one label" clause per program node
 *   2. pairwise "at most one label" clauses per program node
 *   3. pairwise "at most one node" clauses per label
 *   4. per program edge (i, j), i < j, and label k:
 *        -x_{i,k} or OR_{(k,k') in target} x_{j,k'}
 *   5. pins: a unit clause per pinned node, then a negative unit for every
 *      free node on every pinned label
 */
inline Encoding encodeEmbedding(const ProgramGraph& program, const Graph& target,
                                const PinSet& pins = {}) {
  const auto n = program.numNodes();
  const auto m = target.numNodes();
  if (n > m) {
    throw Infeasible("program has " + std::to_string(n) + " nodes but target only " +
                     std::to_string(m));
  }
  const auto occupied = detail::validatePins(pins, n, m);

  Encoding enc;
  enc.vars.numProgram = n;
  enc.vars.numPhysical = m;
  enc.vars.nodes.resize(n);
  for (Node i = 0; i < n; ++i) {
    enc.vars.nodes[i] = i;
  }
  auto& f = enc.formula;
  f.setNumVars(enc.vars.numVars());

  detail::emitExactlyOne(f, enc.vars);
  for (const auto& e : program.edges()) {
    detail::emitAdjacency(f, enc.vars, target, e.u, e.v);
  }
  for (const auto& [node, physical] : pins) {
    f.addClause({enc.vars.var(node, physical)});
  }
  if (!pins.empty()) {
    for (Node i = 0; i < n; ++i) {
      if (pins.contains(i)) {
        continue;
      }
      for (Node k = 0; k < m; ++k) {
        if (occupied[k]) {
          f.addClause({-enc.vars.var(i, k)});
        }
      }
    }
  }
  return enc;
}

inline Encoding encodeEmbedding(const ProgramGraph& program,
                                const ConnectivityGraph& target,
                                const PinSet& pins = {}) {
  return encodeEmbedding(program, target.graph, pins);
}

/**
 * Placement of a subset of program nodes around already pinned ones.
 *
 * Variables exist only for `active` nodes (|active| * |labels| of them).
 * Edges inside `active` get the usual adjacency clauses; an edge from an
 * active node u to a node pinned on label p becomes OR_{k ~ p} x_{u,k}.
 * Edges to nodes that are neither active nor pinned are ignored. Pinned
 * labels are forbidden to every active node.
 */
inline Encoding encodeSubproblem(const ProgramGraph& program,
                                 const std::vector<Node>& active, const Graph& target,
                                 const PinSet& pins) {
  const auto m = target.numNodes();
  if (active.size() + pins.size() > m) {
    throw Infeasible("active and pinned nodes exceed the " + std::to_string(m) +
                     " available qubits");
  }
  const auto occupied = detail::validatePins(pins, program.numNodes(), m);

  Encoding enc;
  enc.vars.numProgram = active.size();
  enc.vars.numPhysical = m;
  enc.vars.nodes = active;
  std::vector<std::optional<std::size_t>> slot(program.numNodes());
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (active[i] >= program.numNodes() || slot[active[i]] || pins.contains(active[i])) {
      throw InvalidArgument("active node " + std::to_string(active[i]) +
                            " is out of range, repeated or already pinned");
    }
    slot[active[i]] = i;
  }
  auto& f = enc.formula;
  f.setNumVars(enc.vars.numVars());

  detail::emitExactlyOne(f, enc.vars);
  for (const auto& e : program.edges()) {
    if (slot[e.u] && slot[e.v]) {
      detail::emitAdjacency(f, enc.vars, target, *slot[e.u], *slot[e.v]);
    }
  }
  for (const auto& e : program.edges()) {
    for (auto [inside, outside] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
      const auto pin = pins.find(outside);
      if (!slot[inside] || pin == pins.end()) {
        continue;
      }
      for (auto k : target.neighbors(pin->second)) {
        f.push(enc.vars.var(*slot[inside], k));
      }
      f.closeClause();
    }
  }
  for (std::size_t i = 0; i < active.size(); ++i) {
    for (Node k = 0; k < m; ++k) {
      if (occupied[k]) {
        f.addClause({-enc.vars.var(i, k)});
      }
    }
  }
  return enc;
}

/**
 * Reads the placement out of a model. Entry i of the result is the physical
 * label of slot i (i.e. of program node vars.nodes[i]).
 */
inline Mapping decodeModel(const Model& model, const VarMap& vars) {
  Mapping mapping;
  mapping.assignment.resize(vars.numProgram);
  std::vector<bool> taken(vars.numPhysical, false);
  for (std::size_t i = 0; i < vars.numProgram; ++i) {
    std::optional<Node> chosen;
    for (std::size_t j = 0; j < vars.numPhysical; ++j) {
      const auto v = static_cast<std::size_t>(vars.var(i, j));
      if (v < model.size() && model[v]) {
        if (chosen) {
          throw InconsistentModel("program slot " + std::to_string(i) +
                                  " is assigned to both " + std::to_string(*chosen) +
                                  " and " + std::to_string(j));
        }
        chosen = static_cast<Node>(j);
      }
    }
    if (!chosen) {
      throw InconsistentModel("program slot " + std::to_string(i) + " is unassigned");
    }
    if (taken[*chosen]) {
      throw InconsistentModel("physical label " + std::to_string(*chosen) +
                              " is assigned twice");
    }
    taken[*chosen] = true;
    mapping.assignment[i] = *chosen;
  }
  return mapping;
}

/// Sidecar describing the var(i, j) convention for external decoders.
inline std::string varMapJson(const VarMap& vars) {
  return "{\"num_program\": " + std::to_string(vars.numProgram) +
         ", \"num_physical\": " + std::to_string(vars.numPhysical) + "}\n";
}

} // namespace swapmap
