#pragma once

#include "swapmap/error.hpp"

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace swapmap {

/// DIMACS-style literal: +v or -v for variable v >= 1.
using Literal = std::int32_t;

/// Truth assignment indexed by variable; entry 0 is unused.
using Model = std::vector<bool>;

/**
 * CNF formula with flat clause storage.
 *
 * Clauses keep their insertion order, which is also their DIMACS order.
 */
class CnfFormula {
public:
  CnfFormula() = default;
  explicit CnfFormula(std::size_t numVars) : numVars_(numVars) {}

  [[nodiscard]] std::size_t numVars() const noexcept { return numVars_; }
  [[nodiscard]] std::size_t numClauses() const noexcept { return offsets_.size() - 1; }
  [[nodiscard]] std::size_t numLiterals() const noexcept { return literals_.size(); }

  void setNumVars(std::size_t numVars) { numVars_ = numVars; }

  void addClause(std::span<const Literal> clause) {
    for (auto lit : clause) {
      noteLiteral(lit);
    }
    literals_.insert(literals_.end(), clause.begin(), clause.end());
    offsets_.push_back(literals_.size());
  }
  void addClause(std::initializer_list<Literal> clause) {
    addClause(std::span<const Literal>(clause.begin(), clause.size()));
  }

  /// Incremental construction: push literals, then close the clause.
  void push(Literal lit) {
    noteLiteral(lit);
    literals_.push_back(lit);
  }
  void closeClause() { offsets_.push_back(literals_.size()); }

  [[nodiscard]] std::span<const Literal> clause(std::size_t i) const {
    return {literals_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  /// Throws InvalidArgument on a zero literal, an out-of-range variable or a
  /// clause containing both v and -v.
  void validate() const {
    // stamp[v] records the clause (1-based) and sign v was last seen with
    std::vector<std::int64_t> stamp(numVars_ + 1, 0);
    for (std::size_t c = 0; c < numClauses(); ++c) {
      const auto id = static_cast<std::int64_t>(c + 1);
      for (auto lit : clause(c)) {
        if (lit == 0) {
          throw InvalidArgument("clause " + std::to_string(c) + " contains literal 0");
        }
        const auto var = static_cast<std::size_t>(std::abs(lit));
        if (var > numVars_) {
          throw InvalidArgument("clause " + std::to_string(c) + " uses variable " +
                                std::to_string(var) + " > num_vars " +
                                std::to_string(numVars_));
        }
        const std::int64_t mark = lit > 0 ? id : -id;
        if (stamp[var] == -mark) {
          throw InvalidArgument("clause " + std::to_string(c) + " contains both " +
                                std::to_string(var) + " and -" + std::to_string(var));
        }
        stamp[var] = mark;
      }
    }
  }

  [[nodiscard]] bool satisfiedBy(const Model& model) const {
    for (std::size_t c = 0; c < numClauses(); ++c) {
      if (!clauseSatisfied(c, model)) {
        return false;
      }
    }
    return true;
  }

  [[nodiscard]] bool clauseSatisfied(std::size_t c, const Model& model) const {
    for (auto lit : clause(c)) {
      const auto var = static_cast<std::size_t>(std::abs(lit));
      if (var < model.size() && model[var] == (lit > 0)) {
        return true;
      }
    }
    return false;
  }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

private:
  void noteLiteral(Literal lit) {
    const auto var = static_cast<std::size_t>(std::abs(lit));
    if (var > numVars_) {
      numVars_ = var;
    }
  }

  std::size_t numVars_ = 0;
  std::vector<Literal> literals_;
  std::vector<std::size_t> offsets_{0};
};

/// Standard DIMACS CNF text; byte-identical for identical formulas.
inline std::string toDimacs(const CnfFormula& formula) {
  std::string out = "p cnf " + std::to_string(formula.numVars()) + " " +
                    std::to_string(formula.numClauses()) + "\n";
  out.reserve(out.size() + formula.numLiterals() * 6 + formula.numClauses() * 2);
  for (std::size_t c = 0; c < formula.numClauses(); ++c) {
    for (auto lit : formula.clause(c)) {
      out += std::to_string(lit);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

/// Reads DIMACS CNF. Comment lines start with 'c'; clauses may span lines.
inline CnfFormula parseDimacs(std::istream& in) {
  std::string line;
  std::size_t lineNo = 0;
  bool haveHeader = false;
  std::size_t declaredClauses = 0;
  CnfFormula formula;
  bool open = false;
  while (std::getline(in, line)) {
    ++lineNo;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == 'c' || line[first] == '%') {
      continue;
    }
    if (line[first] == 'p') {
      std::istringstream header(line.substr(first));
      std::string p;
      std::string cnf;
      long long vars = -1;
      long long clauses = -1;
      header >> p >> cnf >> vars >> clauses;
      if (!header || cnf != "cnf" || vars < 0 || clauses < 0 || haveHeader) {
        throw ParseError("line " + std::to_string(lineNo) + ": bad DIMACS header");
      }
      haveHeader = true;
      formula.setNumVars(static_cast<std::size_t>(vars));
      declaredClauses = static_cast<std::size_t>(clauses);
      continue;
    }
    if (!haveHeader) {
      throw ParseError("line " + std::to_string(lineNo) + ": clause before header");
    }
    std::istringstream body(line);
    std::string token;
    while (body >> token) {
      char* end = nullptr;
      const long long value = std::strtoll(token.c_str(), &end, 10);
      if (end == token.c_str() || *end != '\0') {
        throw ParseError("line " + std::to_string(lineNo) + ": bad literal '" + token +
                         "'");
      }
      if (value == 0) {
        formula.closeClause();
        open = false;
      } else {
        if (static_cast<std::size_t>(std::llabs(value)) > formula.numVars()) {
          throw ParseError("line " + std::to_string(lineNo) + ": variable " +
                           std::to_string(std::llabs(value)) + " exceeds header");
        }
        formula.push(static_cast<Literal>(value));
        open = true;
      }
    }
  }
  if (open) {
    formula.closeClause();
  }
  if (!haveHeader) {
    throw ParseError("missing DIMACS header");
  }
  if (formula.numClauses() != declaredClauses) {
    throw ParseError("header declares " + std::to_string(declaredClauses) +
                     " clauses, found " + std::to_string(formula.numClauses()));
  }
  return formula;
}

} // namespace swapmap
