#pragma once

#include "swapmap/error.hpp"
#include "swapmap/graph.hpp"
#include "swapmap/mapping.hpp"
#include "swapmap/solver.hpp"
#include "swapmap/swap_strategy.hpp"

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace swapmap {

struct EmbedResult {
  bool found = false;
  /// The search hit its budget before deciding.
  bool timedOut = false;
  std::optional<Mapping> mapping;
  std::uint64_t nodesExplored = 0;
  double elapsed = 0.0;
};

namespace detail {

class MonomorphismSearch {
public:
  MonomorphismSearch(const Graph& pattern, const Graph& target,
                     std::chrono::steady_clock::time_point deadline)
      : pattern_(pattern), target_(target), deadline_(deadline),
        m_(target.numNodes()), adj_(m_ * m_, 0), image_(pattern.numNodes()),
        used_(m_, false) {
    for (const auto& e : target.edges()) {
      adj_[e.u * m_ + e.v] = adj_[e.v * m_ + e.u] = 1;
    }
    buildOrder();
  }

  bool run() { return extend(0); }

  [[nodiscard]] bool timedOut() const noexcept { return timedOut_; }
  [[nodiscard]] std::uint64_t explored() const noexcept { return explored_; }
  [[nodiscard]] Mapping mapping() const {
    Mapping m;
    m.assignment = image_;
    return m;
  }

private:
  // Most constrained first: highest degree, then the node with most
  // already-ordered neighbours (ties: higher degree, lower index).
  void buildOrder() {
    const auto n = pattern_.numNodes();
    std::vector<bool> placed(n, false);
    std::vector<std::size_t> links(n, 0);
    order_.reserve(n);
    parent_.assign(n, std::nullopt);
    std::vector<std::size_t> position(n, 0);
    for (std::size_t step = 0; step < n; ++step) {
      std::optional<Node> best;
      for (Node u = 0; u < n; ++u) {
        if (placed[u]) {
          continue;
        }
        if (!best || links[u] > links[*best] ||
            (links[u] == links[*best] && pattern_.degree(u) > pattern_.degree(*best))) {
          best = u;
        }
      }
      const Node u = *best;
      placed[u] = true;
      position[u] = step;
      for (auto w : pattern_.neighbors(u)) {
        if (placed[w] && (!parent_[u] || position[w] < position[*parent_[u]])) {
          parent_[u] = w;
        }
        ++links[w];
      }
      order_.push_back(u);
    }
    earlierNeighbors_.assign(n, {});
    laterDegree_.assign(n, 0);
    for (auto u : order_) {
      for (auto w : pattern_.neighbors(u)) {
        if (position[w] < position[u]) {
          earlierNeighbors_[u].push_back(w);
        } else {
          ++laterDegree_[u];
        }
      }
    }
  }

  bool feasible(Node u, Node k) const {
    if (used_[k] || target_.degree(k) < pattern_.degree(u)) {
      return false;
    }
    for (auto w : earlierNeighbors_[u]) {
      if (adj_[k * m_ + image_[w]] == 0) {
        return false;
      }
    }
    // enough free target neighbours left for u's unplaced neighbours
    std::size_t freeNbrs = 0;
    for (auto kk : target_.neighbors(k)) {
      if (!used_[kk]) {
        ++freeNbrs;
      }
    }
    return freeNbrs >= laterDegree_[u];
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size()) {
      return true;
    }
    if ((++explored_ & 4095U) == 0 && std::chrono::steady_clock::now() >= deadline_) {
      timedOut_ = true;
    }
    if (timedOut_) {
      return false;
    }
    const Node u = order_[depth];
    auto tryCandidate = [&](Node k) {
      if (!feasible(u, k)) {
        return false;
      }
      image_[u] = k;
      used_[k] = true;
      if (extend(depth + 1)) {
        return true;
      }
      used_[k] = false;
      return false;
    };
    if (parent_[u]) {
      for (auto k : target_.neighbors(image_[*parent_[u]])) {
        if (tryCandidate(k)) {
          return true;
        }
        if (timedOut_) {
          return false;
        }
      }
      return false;
    }
    for (Node k = 0; k < m_; ++k) {
      if (tryCandidate(k)) {
        return true;
      }
      if (timedOut_) {
        return false;
      }
    }
    return false;
  }

  const Graph& pattern_;
  const Graph& target_;
  std::chrono::steady_clock::time_point deadline_;
  std::size_t m_;
  std::vector<std::uint8_t> adj_;
  std::vector<Node> order_;
  std::vector<std::optional<Node>> parent_;
  std::vector<std::vector<Node>> earlierNeighbors_;
  std::vector<std::size_t> laterDegree_;
  std::vector<Node> image_;
  std::vector<bool> used_;
  std::uint64_t explored_ = 0;
  bool timedOut_ = false;
};

} // namespace detail

/**
 * Depth-first subgraph monomorphism search (VF2-style state space with
 * degree and mapped-neighbour pruning). Program edges must land on target
 * edges; program non-edges are unconstrained.
 */
inline EmbedResult findEmbedding(const Graph& program, const Graph& target,
                                 SolveBudget budget = {}) {
  const auto start = std::chrono::steady_clock::now();
  EmbedResult result;
  if (program.numNodes() > target.numNodes()) {
    return result;
  }
  detail::MonomorphismSearch search(program, target, budget.deadlineFrom(start));
  result.found = search.run();
  result.timedOut = !result.found && search.timedOut();
  result.nodesExplored = search.explored();
  if (result.found) {
    result.mapping = search.mapping();
  }
  result.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

inline EmbedResult findEmbedding(const Graph& program, const ConnectivityGraph& target,
                                 SolveBudget budget = {}) {
  return findEmbedding(program, target.graph, budget);
}

/// The scan ran out of time; `lastDecided` is the largest depth proven
/// infeasible so far, if any.
class PartialResult : public Error {
public:
  PartialResult(std::string what, std::optional<std::size_t> lastDecided)
      : Error(std::move(what)), lastDecided_(lastDecided) {}
  [[nodiscard]] std::optional<std::size_t> lastDecided() const noexcept { return lastDecided_; }

private:
  std::optional<std::size_t> lastDecided_;
};

/**
 * Smallest depth l whose connectivity graph admits an embedding, by trying
 * l = 0, 1, ... in turn. `budget` covers the whole scan.
 */
inline std::size_t exactLminScan(const ProgramGraph& program, const SwapStrategy& strategy,
                                 SolveBudget budget = {}) {
  if (program.numNodes() > strategy.numQubits()) {
    throw Infeasible("program larger than device");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto deadline = budget.deadlineFrom(start);
  std::optional<std::size_t> lastDecided;
  for (std::size_t l = 0; l <= strategy.depth(); ++l) {
    const auto remaining =
        std::chrono::duration<double>(deadline - std::chrono::steady_clock::now()).count();
    if (remaining <= 0) {
      throw PartialResult("oracle scan out of time", lastDecided);
    }
    const auto target = connectivityGraph(strategy, l);
    const auto r = findEmbedding(program, target.graph, SolveBudget(remaining));
    if (r.timedOut) {
      throw PartialResult("oracle scan out of time at l=" + std::to_string(l), lastDecided);
    }
    if (r.found) {
      if (!preservesEdges(program, target.graph, *r.mapping)) {
        throw Error("oracle returned a mapping that breaks an edge");
      }
      // sanity: feasibility is monotone in l
      const auto full = connectivityGraph(strategy, strategy.depth());
      if (!preservesEdges(program, full.graph, *r.mapping)) {
        throw Error("connectivity is not monotone in depth");
      }
      return l;
    }
    lastDecided = l;
  }
  throw Infeasible("no depth up to " + std::to_string(strategy.depth()) +
                   " admits an embedding");
}

} // namespace swapmap
