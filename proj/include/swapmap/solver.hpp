#pragma once

#include "swapmap/cdcl.hpp"
#include "swapmap/cnf.hpp"
#include "swapmap/error.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace swapmap {

enum class SolveStatus { Sat, Unsat, Timeout };

inline std::string_view toString(SolveStatus s) {
  switch (s) {
  case SolveStatus::Sat:
    return "SAT";
  case SolveStatus::Unsat:
    return "UNSAT";
  case SolveStatus::Timeout:
    return "TIMEOUT";
  }
  return "?";
}

/// Wall-clock allowance for a single SAT instance.
struct SolveBudget {
  double seconds = 600.0;

  SolveBudget() = default;
  explicit SolveBudget(double s) : seconds(s) {
    if (!(s > 0.0)) {
      throw InvalidArgument("solve budget must be positive");
    }
  }

  [[nodiscard]] std::chrono::steady_clock::time_point deadlineFrom(
      std::chrono::steady_clock::time_point start) const {
    return start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(seconds));
  }
};

/// Verdict of one solve. `model` is present iff status == Sat.
struct SolveOutcome {
  SolveStatus status = SolveStatus::Timeout;
  std::optional<Model> model;
  double elapsed = 0.0;
};

/// Any decision procedure with the solve() contract; lets callers swap in
/// the external adapter.
using SatBackend = std::function<SolveOutcome(const CnfFormula&, SolveBudget)>;

/**
 * Decides `formula` with the built-in CDCL solver.
 *
 * Unsat is exact. Timeout means the budget ran out (or `cancel` was raised)
 * and carries no claim. A Sat model is re-checked against every clause
 * before it is returned.
 */
inline SolveOutcome solve(const CnfFormula& formula, SolveBudget budget = {},
                          const std::atomic<bool>* cancel = nullptr,
                          cdcl::Stats* statsOut = nullptr) {
  formula.validate();
  const auto start = std::chrono::steady_clock::now();
  cdcl::Solver solver(formula);
  const auto result = solver.solve(budget.deadlineFrom(start), cancel);
  SolveOutcome out;
  out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (statsOut != nullptr) {
    *statsOut = solver.stats();
  }
  switch (result) {
  case cdcl::Result::Sat: {
    auto model = solver.model();
    if (!formula.satisfiedBy(model)) {
      throw Error("built-in solver produced a model that violates the formula");
    }
    out.status = SolveStatus::Sat;
    out.model = std::move(model);
    break;
  }
  case cdcl::Result::Unsat:
    out.status = SolveStatus::Unsat;
    break;
  case cdcl::Result::Unknown:
    out.status = SolveStatus::Timeout;
    break;
  }
  return out;
}

inline SatBackend builtinBackend() {
  return [](const CnfFormula& f, SolveBudget b) { return solve(f, b); };
}

} // namespace swapmap
