#pragma once

#include "swapmap/cnf.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <vector>

namespace swapmap::cdcl {

// Internal literal: 2 * var + (negated ? 1 : 0), var 0-based.
using Lit = std::uint32_t;
using Var = std::uint32_t;
using ClauseRef = std::uint32_t;

constexpr ClauseRef kNoReason = 0xFFFFFFFFU;

inline constexpr Lit mkLit(Var v, bool negated) { return 2 * v + (negated ? 1U : 0U); }
inline constexpr Var varOf(Lit l) { return l >> 1U; }
inline constexpr Lit negate(Lit l) { return l ^ 1U; }
inline constexpr bool isNegated(Lit l) { return (l & 1U) != 0; }

enum class Result { Sat, Unsat, Unknown };

struct Stats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnedLiterals = 0;
  std::uint64_t removedClauses = 0;
};

/**
 * Conflict-driven clause-learning SAT solver.
 *
 * Two watched literals with blockers and a dedicated binary-clause path,
 * VSIDS branching, phase saving, first-UIP learning with recursive clause
 * minimization, Luby restarts and LBD-based learned clause reduction.
 * Fully deterministic: no randomized choices anywhere.
 */
class Solver {
public:
  explicit Solver(const CnfFormula& formula) {
    const auto n = static_cast<Var>(formula.numVars());
    numVars_ = n;
    value_.assign(2 * static_cast<std::size_t>(n), 0);
    level_.assign(n, 0);
    reason_.assign(n, kNoReason);
    phase_.assign(n, 0);
    activity_.assign(n, 0.0);
    seen_.assign(n, 0);
    heapIndex_.assign(n, -1);
    lbdSeen_.assign(static_cast<std::size_t>(n) + 1, 0);
    watches_.resize(2 * static_cast<std::size_t>(n));
    binWatches_.resize(2 * static_cast<std::size_t>(n));
    trail_.reserve(n);
    for (Var v = 0; v < n; ++v) {
      heapInsert(v);
    }

    std::vector<Lit> lits;
    for (std::size_t c = 0; c < formula.numClauses() && ok_; ++c) {
      lits.clear();
      for (auto l : formula.clause(c)) {
        lits.push_back(mkLit(static_cast<Var>(std::abs(l) - 1), l < 0));
      }
      addInputClause(lits);
    }
  }

  /// Runs until a verdict, the deadline, or `cancel` becoming true.
  Result solve(std::chrono::steady_clock::time_point deadline,
               const std::atomic<bool>* cancel = nullptr) {
    deadline_ = deadline;
    cancel_ = cancel;
    if (!ok_) {
      return Result::Unsat;
    }
    if (propagate() != kNoReason) {
      ok_ = false;
      return Result::Unsat;
    }
    std::uint64_t restartIndex = 0;
    for (;;) {
      const auto budget =
          static_cast<std::uint64_t>(luby(2.0, restartIndex++) * kRestartUnit);
      const Result r = search(budget);
      if (r != Result::Unknown) {
        return r;
      }
      if (outOfTime()) {
        return Result::Unknown;
      }
      ++stats_.restarts;
    }
  }

  /// Model after Result::Sat, as a DIMACS-indexed truth table.
  [[nodiscard]] Model model() const {
    Model m(static_cast<std::size_t>(numVars_) + 1, false);
    for (Var v = 0; v < numVars_; ++v) {
      m[v + 1] = value_[mkLit(v, false)] > 0;
    }
    return m;
  }

  [[nodiscard]] const Stats& stats() const noexcept { return stats_; }

private:
  static constexpr double kRestartUnit = 100.0;
  static constexpr double kVarDecay = 0.95;
  static constexpr double kClauseDecay = 0.999;
  static constexpr std::uint64_t kFirstReduce = 2000;
  static constexpr std::uint64_t kReduceIncrement = 300;

  struct Watcher {
    ClauseRef cref;
    Lit blocker;
  };
  struct BinWatcher {
    Lit other;
    ClauseRef cref;
  };

  // Arena layout per clause: [size][flags][activity bits][lits...]
  // flags: bit0 learnt, bit1 deleted, bits 2.. lbd
  static constexpr std::uint32_t kHeader = 3;

  [[nodiscard]] std::uint32_t clauseSize(ClauseRef c) const { return arena_[c]; }
  [[nodiscard]] Lit* clauseLits(ClauseRef c) { return &arena_[c + kHeader]; }
  [[nodiscard]] const Lit* clauseLits(ClauseRef c) const { return &arena_[c + kHeader]; }
  [[nodiscard]] bool isLearnt(ClauseRef c) const { return (arena_[c + 1] & 1U) != 0; }
  [[nodiscard]] bool isDeleted(ClauseRef c) const { return (arena_[c + 1] & 2U) != 0; }
  void markDeleted(ClauseRef c) { arena_[c + 1] |= 2U; }
  [[nodiscard]] std::uint32_t lbd(ClauseRef c) const { return arena_[c + 1] >> 2U; }
  void setLbd(ClauseRef c, std::uint32_t v) { arena_[c + 1] = (arena_[c + 1] & 3U) | (v << 2U); }
  [[nodiscard]] float clauseActivity(ClauseRef c) const {
    float a = 0;
    std::memcpy(&a, &arena_[c + 2], sizeof(a));
    return a;
  }
  void setClauseActivity(ClauseRef c, float a) { std::memcpy(&arena_[c + 2], &a, sizeof(a)); }

  ClauseRef allocClause(const std::vector<Lit>& lits, bool learnt, std::uint32_t lbdValue) {
    const auto cref = static_cast<ClauseRef>(arena_.size());
    arena_.push_back(static_cast<std::uint32_t>(lits.size()));
    arena_.push_back((learnt ? 1U : 0U) | (lbdValue << 2U));
    arena_.push_back(0);
    arena_.insert(arena_.end(), lits.begin(), lits.end());
    return cref;
  }

  void attach(ClauseRef c) {
    const Lit* lits = clauseLits(c);
    if (clauseSize(c) == 2) {
      binWatches_[lits[0]].push_back({lits[1], c});
      binWatches_[lits[1]].push_back({lits[0], c});
    } else {
      watches_[lits[0]].push_back({c, lits[1]});
      watches_[lits[1]].push_back({c, lits[0]});
    }
  }

  [[nodiscard]] std::int8_t litValue(Lit l) const { return value_[l]; }

  void assign(Lit l, ClauseRef reason) {
    const Var v = varOf(l);
    value_[l] = 1;
    value_[negate(l)] = -1;
    level_[v] = decisionLevel();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  [[nodiscard]] std::uint32_t decisionLevel() const {
    return static_cast<std::uint32_t>(trailLim_.size());
  }

  void addInputClause(std::vector<Lit>& lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::size_t j = 0;
    for (std::size_t i = 0; i < lits.size(); ++i) {
      if (i + 1 < lits.size() && lits[i + 1] == negate(lits[i])) {
        return;  // tautology
      }
      const auto val = litValue(lits[i]);
      if (val > 0) {
        return;
      }
      if (val == 0) {
        lits[j++] = lits[i];
      }
    }
    lits.resize(j);
    if (lits.empty()) {
      ok_ = false;
      return;
    }
    if (lits.size() == 1) {
      assign(lits[0], kNoReason);
      return;
    }
    const auto c = allocClause(lits, false, 0);
    attach(c);
    ++numOriginal_;
  }

  /// Returns the conflicting clause, or kNoReason.
  ClauseRef propagate() {
    ClauseRef conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      const Lit p = trail_[qhead_++];
      const Lit falseLit = negate(p);
      ++stats_.propagations;

      for (const auto& bw : binWatches_[falseLit]) {
        const auto val = litValue(bw.other);
        if (val == 0) {
          assign(bw.other, bw.cref);
        } else if (val < 0) {
          qhead_ = trail_.size();
          return bw.cref;
        }
      }

      auto& ws = watches_[falseLit];
      std::size_t i = 0;
      std::size_t j = 0;
      const std::size_t end = ws.size();
      while (i < end) {
        const Watcher w = ws[i];
        if (litValue(w.blocker) > 0) {
          ws[j++] = ws[i++];
          continue;
        }
        const ClauseRef c = w.cref;
        if (isDeleted(c)) {
          ++i;
          continue;
        }
        Lit* lits = clauseLits(c);
        if (lits[0] == falseLit) {
          std::swap(lits[0], lits[1]);
        }
        ++i;
        const Lit first = lits[0];
        if (first != w.blocker && litValue(first) > 0) {
          ws[j++] = {c, first};
          continue;
        }
        const std::uint32_t size = clauseSize(c);
        bool moved = false;
        for (std::uint32_t k = 2; k < size; ++k) {
          if (litValue(lits[k]) >= 0) {
            std::swap(lits[1], lits[k]);
            watches_[lits[1]].push_back({c, first});
            moved = true;
            break;
          }
        }
        if (moved) {
          continue;
        }
        ws[j++] = {c, first};
        if (litValue(first) < 0) {
          conflict = c;
          qhead_ = trail_.size();
          while (i < end) {
            ws[j++] = ws[i++];
          }
        } else {
          assign(first, c);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) {
        return conflict;
      }
    }
    return conflict;
  }

  // Reason clause literals with the implied literal first.
  void reasonLits(ClauseRef c, Lit implied, std::vector<Lit>& out) const {
    out.clear();
    const Lit* lits = clauseLits(c);
    const auto size = clauseSize(c);
    out.push_back(implied);
    for (std::uint32_t k = 0; k < size; ++k) {
      if (lits[k] != implied) {
        out.push_back(lits[k]);
      }
    }
  }

  void analyze(ClauseRef conflict, std::vector<Lit>& learnt, std::uint32_t& backLevel) {
    learnt.clear();
    learnt.push_back(0);  // placeholder for the asserting literal
    int pathCount = 0;
    Lit p = 0;
    bool first = true;
    std::size_t index = trail_.size();
    ClauseRef c = conflict;
    for (;;) {
      if (isLearnt(c)) {
        bumpClause(c);
      }
      const Lit* lits = clauseLits(c);
      const auto size = clauseSize(c);
      for (std::uint32_t k = 0; k < size; ++k) {
        const Lit q = lits[k];
        if (!first && q == p) {
          continue;
        }
        const Var v = varOf(q);
        if (seen_[v] == 0 && level_[v] > 0) {
          bumpVar(v);
          seen_[v] = 1;
          if (level_[v] >= decisionLevel()) {
            ++pathCount;
          } else {
            learnt.push_back(q);
          }
        }
      }
      first = false;
      do {
        p = trail_[--index];
      } while (seen_[varOf(p)] == 0);
      c = reason_[varOf(p)];
      seen_[varOf(p)] = 0;
      if (--pathCount <= 0) {
        break;
      }
    }
    learnt[0] = negate(p);

    // recursive minimization
    toClear_.assign(learnt.begin(), learnt.end());
    std::uint32_t abstract = 0;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      abstract |= abstractLevel(varOf(learnt[k]));
    }
    std::size_t j = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      const Var v = varOf(learnt[k]);
      if (reason_[v] == kNoReason || !litRedundant(learnt[k], abstract)) {
        learnt[j++] = learnt[k];
      }
    }
    learnt.resize(j);
    stats_.learnedLiterals += learnt.size();

    if (learnt.size() == 1) {
      backLevel = 0;
    } else {
      std::size_t maxIdx = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k) {
        if (level_[varOf(learnt[k])] > level_[varOf(learnt[maxIdx])]) {
          maxIdx = k;
        }
      }
      std::swap(learnt[1], learnt[maxIdx]);
      backLevel = level_[varOf(learnt[1])];
    }
    for (auto l : toClear_) {
      seen_[varOf(l)] = 0;
    }
  }

  [[nodiscard]] std::uint32_t abstractLevel(Var v) const {
    return 1U << (level_[v] & 31U);
  }

  bool litRedundant(Lit p, std::uint32_t abstract) {
    stack_.clear();
    stack_.push_back(p);
    const std::size_t top = toClear_.size();
    while (!stack_.empty()) {
      const Var v = varOf(stack_.back());
      stack_.pop_back();
      const ClauseRef c = reason_[v];
      const Lit* lits = clauseLits(c);
      const auto size = clauseSize(c);
      for (std::uint32_t k = 0; k < size; ++k) {
        const Lit q = lits[k];
        const Var u = varOf(q);
        if (u == v || seen_[u] != 0 || level_[u] == 0) {
          continue;
        }
        if (reason_[u] != kNoReason && (abstractLevel(u) & abstract) != 0) {
          seen_[u] = 1;
          stack_.push_back(q);
          toClear_.push_back(q);
        } else {
          for (std::size_t t = top; t < toClear_.size(); ++t) {
            seen_[varOf(toClear_[t])] = 0;
          }
          toClear_.resize(top);
          return false;
        }
      }
    }
    return true;
  }

  std::uint32_t computeLbd(const std::vector<Lit>& lits) {
    ++lbdStamp_;
    std::uint32_t count = 0;
    for (auto l : lits) {
      const auto lv = level_[varOf(l)];
      if (lbdSeen_[lv] != lbdStamp_) {
        lbdSeen_[lv] = lbdStamp_;
        ++count;
      }
    }
    return count;
  }

  void cancelUntil(std::uint32_t target) {
    if (decisionLevel() <= target) {
      return;
    }
    for (std::size_t k = trail_.size(); k > trailLim_[target]; --k) {
      const Lit l = trail_[k - 1];
      const Var v = varOf(l);
      value_[l] = 0;
      value_[negate(l)] = 0;
      reason_[v] = kNoReason;
      phase_[v] = isNegated(l) ? 0 : 1;
      if (heapIndex_[v] < 0) {
        heapInsert(v);
      }
    }
    trail_.resize(trailLim_[target]);
    trailLim_.resize(target);
    qhead_ = trail_.size();
  }

  Result search(std::uint64_t conflictBudget) {
    std::uint64_t conflictsHere = 0;
    std::vector<Lit> learnt;
    for (;;) {
      const ClauseRef conflict = propagate();
      if (conflict != kNoReason) {
        ++stats_.conflicts;
        ++conflictsHere;
        if (decisionLevel() == 0) {
          ok_ = false;
          return Result::Unsat;
        }
        std::uint32_t backLevel = 0;
        analyze(conflict, learnt, backLevel);
        cancelUntil(backLevel);
        if (learnt.size() == 1) {
          assign(learnt[0], kNoReason);
        } else {
          const auto l = computeLbd(learnt);
          const ClauseRef c = allocClause(learnt, true, l);
          learnts_.push_back(c);
          attach(c);
          bumpClause(c);
          assign(learnt[0], c);
        }
        varInc_ /= kVarDecay;
        clauseInc_ /= kClauseDecay;

        if ((stats_.conflicts & 63U) == 0 && outOfTime()) {
          return Result::Unknown;
        }
        if (stats_.conflicts >= nextReduce_) {
          nextReduce_ += kFirstReduce + kReduceIncrement * ++reductions_;
          reduceLearnts();
        }
        continue;
      }
      if (conflictsHere >= conflictBudget) {
        cancelUntil(0);
        return Result::Unknown;
      }
      if ((++stats_.decisions & 1023U) == 0 && outOfTime()) {
        return Result::Unknown;
      }
      const auto next = pickBranch();
      if (!next) {
        return Result::Sat;
      }
      trailLim_.push_back(static_cast<std::uint32_t>(trail_.size()));
      assign(*next, kNoReason);
    }
  }

  std::optional<Lit> pickBranch() {
    while (!heap_.empty()) {
      const Var v = heapPop();
      if (value_[mkLit(v, false)] == 0) {
        return mkLit(v, phase_[v] == 0);
      }
    }
    return std::nullopt;
  }

  bool outOfTime() const {
    if (cancel_ != nullptr && cancel_->load(std::memory_order_relaxed)) {
      return true;
    }
    return std::chrono::steady_clock::now() >= deadline_;
  }

  [[nodiscard]] bool locked(ClauseRef c) const {
    const Lit l0 = clauseLits(c)[0];
    const Lit l1 = clauseLits(c)[1];
    return (value_[l0] > 0 && reason_[varOf(l0)] == c) ||
           (value_[l1] > 0 && reason_[varOf(l1)] == c);
  }

  void reduceLearnts() {
    std::sort(learnts_.begin(), learnts_.end(), [this](ClauseRef a, ClauseRef b) {
      if (lbd(a) != lbd(b)) {
        return lbd(a) > lbd(b);
      }
      if (clauseActivity(a) != clauseActivity(b)) {
        return clauseActivity(a) < clauseActivity(b);
      }
      return a < b;
    });
    const std::size_t half = learnts_.size() / 2;
    std::size_t j = 0;
    for (std::size_t i = 0; i < learnts_.size(); ++i) {
      const ClauseRef c = learnts_[i];
      if (i < half && lbd(c) > 2 && clauseSize(c) > 2 && !locked(c)) {
        markDeleted(c);
        wasted_ += clauseSize(c) + kHeader;
        ++stats_.removedClauses;
      } else {
        learnts_[j++] = c;
      }
    }
    learnts_.resize(j);
    if (wasted_ * 4 > arena_.size()) {
      collectGarbage();
    }
  }

  void collectGarbage() {
    std::vector<std::uint32_t> fresh;
    fresh.reserve(arena_.size() - wasted_);
    std::vector<ClauseRef> relocation;
    // walk the arena in order; live clauses are copied
    std::vector<std::pair<ClauseRef, ClauseRef>> moved;
    for (ClauseRef c = 0; c < arena_.size(); c += kHeader + arena_[c]) {
      if (isDeleted(c)) {
        continue;
      }
      const auto nc = static_cast<ClauseRef>(fresh.size());
      fresh.insert(fresh.end(), arena_.begin() + c,
                   arena_.begin() + c + kHeader + arena_[c]);
      moved.emplace_back(c, nc);
    }
    auto relocate = [&moved](ClauseRef c) -> std::optional<ClauseRef> {
      auto it = std::lower_bound(moved.begin(), moved.end(), std::pair{c, ClauseRef{0}},
                                 [](const auto& a, const auto& b) { return a.first < b.first; });
      if (it == moved.end() || it->first != c) {
        return std::nullopt;
      }
      return it->second;
    };
    for (auto& ws : watches_) {
      std::size_t j = 0;
      for (const auto& w : ws) {
        if (auto nc = relocate(w.cref)) {
          ws[j++] = {*nc, w.blocker};
        }
      }
      ws.resize(j);
    }
    for (auto& ws : binWatches_) {
      for (auto& w : ws) {
        w.cref = *relocate(w.cref);
      }
    }
    for (Var v = 0; v < numVars_; ++v) {
      if (reason_[v] != kNoReason && value_[mkLit(v, false)] != 0) {
        reason_[v] = *relocate(reason_[v]);
      }
    }
    for (auto& c : learnts_) {
      c = *relocate(c);
    }
    arena_ = std::move(fresh);
    wasted_ = 0;
  }

  void bumpVar(Var v) {
    activity_[v] += varInc_;
    if (activity_[v] > 1e100) {
      for (auto& a : activity_) {
        a *= 1e-100;
      }
      varInc_ *= 1e-100;
    }
    if (heapIndex_[v] >= 0) {
      heapUp(static_cast<std::size_t>(heapIndex_[v]));
    }
  }

  void bumpClause(ClauseRef c) {
    const float a = clauseActivity(c) + static_cast<float>(clauseInc_);
    setClauseActivity(c, a);
    if (a > 1e20F) {
      for (auto l : learnts_) {
        setClauseActivity(l, clauseActivity(l) * 1e-20F);
      }
      clauseInc_ *= 1e-20;
    }
  }

  // max-heap on activity, ties by lower variable index
  [[nodiscard]] bool heapBefore(Var a, Var b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }
  void heapInsert(Var v) {
    heapIndex_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heapUp(heap_.size() - 1);
  }
  void heapUp(std::size_t i) {
    const Var v = heap_[i];
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!heapBefore(v, heap_[parent])) {
        break;
      }
      heap_[i] = heap_[parent];
      heapIndex_[heap_[i]] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = v;
    heapIndex_[v] = static_cast<int>(i);
  }
  void heapDown(std::size_t i) {
    const Var v = heap_[i];
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= heap_.size()) {
        break;
      }
      if (child + 1 < heap_.size() && heapBefore(heap_[child + 1], heap_[child])) {
        ++child;
      }
      if (!heapBefore(heap_[child], v)) {
        break;
      }
      heap_[i] = heap_[child];
      heapIndex_[heap_[i]] = static_cast<int>(i);
      i = child;
    }
    heap_[i] = v;
    heapIndex_[v] = static_cast<int>(i);
  }
  Var heapPop() {
    const Var top = heap_.front();
    heapIndex_[top] = -1;
    const Var last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heapIndex_[last] = 0;
      heapDown(0);
    }
    return top;
  }

  static double luby(double y, std::uint64_t x) {
    std::uint64_t size = 1;
    std::uint64_t seq = 0;
    while (size < x + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1U;
      --seq;
      x = x % size;
    }
    return std::pow(y, static_cast<double>(seq));
  }

  Var numVars_ = 0;
  bool ok_ = true;
  std::vector<std::int8_t> value_;
  std::vector<std::uint32_t> level_;
  std::vector<ClauseRef> reason_;
  std::vector<std::uint8_t> phase_;
  std::vector<double> activity_;
  std::vector<std::uint8_t> seen_;
  std::vector<Lit> trail_;
  std::vector<std::uint32_t> trailLim_;
  std::size_t qhead_ = 0;

  std::vector<std::uint32_t> arena_;
  std::size_t wasted_ = 0;
  std::vector<ClauseRef> learnts_;
  std::size_t numOriginal_ = 0;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::vector<BinWatcher>> binWatches_;

  std::vector<Var> heap_;
  std::vector<int> heapIndex_;
  double varInc_ = 1.0;
  double clauseInc_ = 1.0;

  std::vector<Lit> toClear_;
  std::vector<Lit> stack_;
  std::vector<std::uint32_t> lbdSeen_;
  std::uint32_t lbdStamp_ = 0;

  std::uint64_t nextReduce_ = kFirstReduce;
  std::uint64_t reductions_ = 0;

  std::chrono::steady_clock::time_point deadline_{};
  const std::atomic<bool>* cancel_ = nullptr;
  Stats stats_;
};

} // namespace swapmap::cdcl
