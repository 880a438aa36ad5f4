#pragma once

#include "swapmap/error.hpp"
#include "swapmap/graph.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace swapmap {

/// Initial placement: assignment[i] is the physical qubit of program node i.
struct Mapping {
  std::vector<Node> assignment;

  [[nodiscard]] std::size_t size() const noexcept { return assignment.size(); }
  Node operator[](std::size_t i) const { return assignment[i]; }

  /// Throws InvalidArgument unless total on `numProgram` nodes and injective
  /// into `numPhysical` qubits.
  void validate(std::size_t numProgram, std::size_t numPhysical) const {
    if (assignment.size() != numProgram) {
      throw InvalidArgument("mapping covers " + std::to_string(assignment.size()) +
                            " nodes, program has " + std::to_string(numProgram));
    }
    std::vector<bool> used(numPhysical, false);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      const auto q = assignment[i];
      if (q >= numPhysical) {
        throw InvalidArgument("node " + std::to_string(i) + " mapped to qubit " +
                              std::to_string(q) + " outside the device");
      }
      if (used[q]) {
        throw InvalidArgument("qubit " + std::to_string(q) + " used twice");
      }
      used[q] = true;
    }
  }

  friend bool operator==(const Mapping&, const Mapping&) = default;
};

/// True iff every program edge lands on an edge of `target` under `mapping`.
inline bool preservesEdges(const Graph& program, const Graph& target,
                           const Mapping& mapping) {
  for (const auto& e : program.edges()) {
    if (!target.hasEdge(mapping[e.u], mapping[e.v])) {
      return false;
    }
  }
  return true;
}

inline Mapping identityMapping(std::size_t n) {
  Mapping m;
  m.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.assignment[i] = static_cast<Node>(i);
  }
  return m;
}

} // namespace swapmap
