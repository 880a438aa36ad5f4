#pragma once

#include "swapmap/error.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace swapmap {

using Node = std::uint32_t;

/// Undirected edge, always stored with the smaller endpoint first.
struct Edge {
  Node u = 0;
  Node v = 0;

  constexpr Edge() = default;
  constexpr Edge(Node a, Node b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/**
 * Simple undirected graph on dense 0-based node indices.
 *
 * The edge list is kept sorted and duplicate free; adjacency lists are built
 * on construction. Values are immutable once built.
 */
class Graph {
public:
  Graph() = default;

  /// Throws InvalidArgument on self-loops, duplicates or out-of-range endpoints.
  Graph(std::size_t numNodes, std::vector<Edge> edges)
      : numNodes_(numNodes), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      if (e.u == e.v) {
        throw InvalidArgument("self-loop on node " + std::to_string(e.u));
      }
      if (e.v >= numNodes_) {
        throw InvalidArgument("edge (" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + ") has endpoint >= " +
                              std::to_string(numNodes_));
      }
      if (i > 0 && edges_[i - 1] == e) {
        throw InvalidArgument("duplicate edge (" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + ")");
      }
    }
    adjacency_.assign(numNodes_, {});
    for (const auto& e : edges_) {
      adjacency_[e.u].push_back(e.v);
      adjacency_[e.v].push_back(e.u);
    }
    for (auto& nbrs : adjacency_) {
      std::sort(nbrs.begin(), nbrs.end());
    }
  }

  [[nodiscard]] std::size_t numNodes() const noexcept { return numNodes_; }
  [[nodiscard]] std::size_t numEdges() const noexcept { return edges_.size(); }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] const std::vector<Node>& neighbors(Node n) const {
    return adjacency_.at(n);
  }
  [[nodiscard]] std::size_t degree(Node n) const { return neighbors(n).size(); }

  [[nodiscard]] bool hasEdge(Node a, Node b) const {
    if (a >= numNodes_ || b >= numNodes_ || a == b) {
      return false;
    }
    const auto& nbrs = adjacency_[a];
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
  }

  [[nodiscard]] bool isComplete() const noexcept {
    return edges_.size() == numNodes_ * (numNodes_ - (numNodes_ > 0 ? 1 : 0)) / 2;
  }

  /// Subgraph on `nodes`, relabelled to 0..nodes.size()-1 in the given order.
  [[nodiscard]] Graph induced(const std::vector<Node>& nodes) const {
    std::vector<std::int64_t> local(numNodes_, -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      local.at(nodes[i]) = static_cast<std::int64_t>(i);
    }
    std::vector<Edge> sub;
    for (const auto& e : edges_) {
      if (local[e.u] >= 0 && local[e.v] >= 0) {
        sub.emplace_back(static_cast<Node>(local[e.u]),
                         static_cast<Node>(local[e.v]));
      }
    }
    return {nodes.size(), std::move(sub)};
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.numNodes_ == b.numNodes_ && a.edges_ == b.edges_;
  }

private:
  std::size_t numNodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Node>> adjacency_;
};

/// Nodes are program qubits, edges are commuting two-qubit gates.
using ProgramGraph = Graph;
/// Nodes are physical qubits, edges are native two-qubit interactions.
using CouplingMap = Graph;

/// Path 0 - 1 - ... - (n-1).
inline CouplingMap lineCouplingMap(std::size_t n) {
  if (n < 2) {
    throw InvalidArgument("line coupling map needs at least 2 qubits, got " +
                          std::to_string(n));
  }
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.emplace_back(static_cast<Node>(i), static_cast<Node>(i + 1));
  }
  return {n, std::move(edges)};
}

inline Graph pathGraph(std::size_t n) {
  return n < 2 ? Graph(n, {}) : lineCouplingMap(n);
}

inline Graph completeGraph(std::size_t n) {
  std::vector<Edge> edges;
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      edges.emplace_back(i, j);
    }
  }
  return {n, std::move(edges)};
}

} // namespace swapmap
