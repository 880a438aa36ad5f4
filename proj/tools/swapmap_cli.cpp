#include "swapmap/swapmap.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace swapmap;

namespace {

// Files written so far; removed again if the command fails.
std::vector<fs::path> g_written;

void emit(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  io::writeFileAtomic(path, content);
  g_written.push_back(path);
}

void removePartialOutputs() {
  for (const auto& p : g_written) {
    std::error_code ec;
    fs::remove(p, ec);
  }
  g_written.clear();
}

double secondsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Common {
  std::string graph;
  std::string strategy;
  std::size_t n = 0;
  double budget = 600.0;
  std::string solver = "builtin";
};

SatBackend makeBackend(const std::string& spec) {
  if (spec == "builtin") {
    return builtinBackend();
  }
  const std::string prefix = "external:";
  if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size()) {
    return externalBackend(spec.substr(prefix.size()));
  }
  throw InvalidArgument("--solver must be 'builtin' or 'external:<cmd>', got '" + spec + "'");
}

SwapStrategy loadStrategy(const Common& c, std::size_t programNodes) {
  if (!c.strategy.empty()) {
    return io::readStrategy(c.strategy);
  }
  return lineSwapStrategy(c.n != 0 ? c.n : programNodes);
}

Graph makeGraph(const std::string& kind, std::size_t n, double p, std::uint64_t seed) {
  if (kind == "rr3") {
    return randomRegularGraph(n, 3, {seed});
  }
  if (kind == "gnp") {
    return gnpGraph(n, p, {seed});
  }
  throw InvalidArgument("--kind must be rr3 or gnp");
}

void addCommon(CLI::App* cmd, Common& c, bool needGraph) {
  auto* g = cmd->add_option("--graph", c.graph, "program graph JSON");
  if (needGraph) {
    g->required();
  }
  cmd->add_option("--strategy", c.strategy, "swap strategy JSON (default: line)");
  cmd->add_option("--n", c.n, "qubits of the line device (default: graph size)");
  cmd->add_option("--budget-seconds", c.budget, "time budget per SAT instance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--solver", c.solver, "builtin or external:<cmd>");
}

// ---- generate -------------------------------------------------------------------

struct GenerateArgs {
  std::string kind = "rr3";
  std::size_t n = 0;
  double p = 0.2;
  std::uint64_t seed = 0;
  std::string out;
};

int runGenerate(const GenerateArgs& a) {
  const auto g = makeGraph(a.kind, a.n, a.p, a.seed);
  if (a.out.empty()) {
    std::cout << io::graphText(g);
  } else {
    emit(a.out, io::graphText(g));
  }
  return 0;
}

// ---- encode ---------------------------------------------------------------------

struct EncodeArgs {
  Common common;
  std::size_t depth = 0;
  std::string out;
};

int runEncode(const EncodeArgs& a) {
  const auto program = io::readGraph(a.common.graph);
  const auto strategy = loadStrategy(a.common, program.numNodes());
  const auto target = connectivityGraph(strategy, a.depth);
  const auto enc = encodeEmbedding(program, target);
  emit(a.out, toDimacs(enc.formula));
  emit(a.out + ".varmap.json", varMapJson(enc.vars));
  std::cout << "vars " << enc.formula.numVars() << " clauses " << enc.formula.numClauses()
            << "\n";
  return 0;
}

// ---- solve ----------------------------------------------------------------------

struct SolveArgs {
  std::string cnf;
  double budget = 600.0;
  std::string solver = "builtin";
  std::string out;
};

int runSolve(const SolveArgs& a) {
  std::istringstream in(io::readFile(a.cnf));
  const auto formula = parseDimacs(in);
  const auto outcome = makeBackend(a.solver)(formula, SolveBudget(a.budget));
  std::cout << toString(outcome.status) << " " << io::formatSeconds(outcome.elapsed) << "\n";
  if (!a.out.empty() && outcome.model) {
    std::string text = "v";
    for (std::size_t v = 1; v <= formula.numVars(); ++v) {
      text += " " + std::string((*outcome.model)[v] ? "" : "-") + std::to_string(v);
    }
    emit(a.out, text + " 0\n");
  }
  return 0;
}

// ---- map ------------------------------------------------------------------------

struct MapArgs {
  Common common;
  std::size_t clusters = 0;
  std::uint64_t seed = 0;
  bool checkOracle = false;
  bool scan = false;
  std::string out;
  std::string trace;
};

int runMap(const MapArgs& a) {
  const auto program = io::readGraph(a.common.graph);
  const auto strategy = loadStrategy(a.common, program.numNodes());
  const SolveBudget budget(a.common.budget);
  const auto backend = makeBackend(a.common.solver);
  const fs::path tracePath = !a.trace.empty() ? fs::path(a.trace)
                                              : fs::path(a.out).replace_extension(".trace.csv");

  if (a.scan) {
    const auto trace = linearScanTrace(program, strategy, budget, backend);
    emit(tracePath, io::traceCsv(trace));
    return 0;
  }

  const auto result =
      a.clusters > 0
          ? clusteredMapping(program, strategy, spectralPartition(program, a.clusters, {a.seed}),
                             budget, backend)
          : binarySearchMapping(program, strategy, budget, backend);

  if (a.checkOracle) {
    if (program.numNodes() > 16) {
      throw InvalidArgument("--check-oracle is limited to graphs with at most 16 nodes");
    }
    const auto exact = exactLminScan(program, strategy, budget);
    const bool timedOut = std::any_of(result.trace.begin(), result.trace.end(), [](const auto& t) {
      return t.status == SolveStatus::Timeout;
    });
    const bool ok = a.clusters > 0 || timedOut ? result.lMin >= exact : result.lMin == exact;
    if (!ok) {
      throw Error("oracle disagreement: search found l_min=" + std::to_string(result.lMin) +
                  ", oracle scan found " + std::to_string(exact));
    }
    std::cerr << "oracle agrees (exact l_min " << exact << ")\n";
  }

  emit(a.out, io::mappingText(result.mapping, result.lMin));
  emit(tracePath, io::traceCsv(result.trace));
  std::cout << "l_min " << result.lMin << " solver_calls " << result.solverCalls << "\n";
  return 0;
}

// ---- route ----------------------------------------------------------------------

struct RouteArgs {
  Common common;
  std::string mapping;
  bool trim = false;
  std::string out;
};

int runRoute(const RouteArgs& a) {
  const auto program = io::readGraph(a.common.graph);
  const auto strategy = loadStrategy(a.common, program.numNodes());
  const auto mapping =
      a.mapping.empty() ? identityMapping(program.numNodes()) : io::readMapping(a.mapping).first;
  const auto circuit = route(program, strategy, mapping, RouteOptions{a.trim});
  const auto report = verifyRouting(circuit, program, strategy, mapping);
  if (!report) {
    throw Error("routing verification failed: " + report.violation);
  }
  if (!a.out.empty()) {
    emit(a.out, io::circuitText(circuit));
  }
  std::cout << "swap_layers " << circuit.swapLayersUsed << " swaps_applied "
            << circuit.swapsApplied << " cnot_count " << circuit.cnotCount << "\n";
  return 0;
}

// ---- oracle-timing --------------------------------------------------------------

struct OracleTimingArgs {
  std::vector<std::size_t> sizes{10, 12, 14, 16};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double p = 0.2;
  double budget = 600.0;
  std::string out;
};

// Times the backtracking oracle at l_min and l_min - 1 (found by SAT).
int runOracleTiming(const OracleTimingArgs& a) {
  std::string csv = "n,seed,l,found,seconds,nodes_explored\n";
  for (auto n : a.sizes) {
    for (auto seed : a.seeds) {
      const auto program = gnpGraph(n, a.p, {seed});
      const auto strategy = lineSwapStrategy(n);
      const auto search = binarySearchMapping(program, strategy, SolveBudget(a.budget));
      for (auto l : {search.lMin, search.lMin == 0 ? search.lMin : search.lMin - 1}) {
        const auto r = findEmbedding(program, connectivityGraph(strategy, l), SolveBudget(a.budget));
        csv += std::to_string(n) + "," + std::to_string(seed) + "," + std::to_string(l) + "," +
               (r.timedOut ? "timeout" : (r.found ? "yes" : "no")) + "," +
               io::formatSeconds(r.elapsed) + "," + std::to_string(r.nodesExplored) + "\n";
        if (search.lMin == 0) {
          break;
        }
      }
    }
  }
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    emit(a.out, csv);
  }
  return 0;
}

// ---- bench ----------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::string> kinds{"rr3"};
  std::vector<std::size_t> sizes{40};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<std::string> methods{"trivial", "random", "sat"};
  double p = 0.2;
  double budget = 600.0;
  std::string solver = "builtin";
  std::size_t clusters = 4;
  std::size_t randomTrials = 100;
  bool trim = false;
  std::size_t jobs = 1;
  std::string out;
  std::string traceDir;
};

struct Cell {
  std::string kind;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string method;
};

struct CellResult {
  std::size_t swapLayers = 0;
  std::size_t swapsApplied = 0;
  std::size_t cnotCount = 0;
  double seconds = 0.0;
  std::vector<TraceEntry> trace;
  std::string error;
};

int methodRank(const std::string& m) {
  static const std::vector<std::string> order{"trivial", "random", "sat", "clustered"};
  return static_cast<int>(std::find(order.begin(), order.end(), m) - order.begin());
}

CellResult runCell(const Cell& cell, const BenchArgs& a, const SatBackend& backend) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto program = makeGraph(cell.kind, cell.n, a.p, cell.seed);
  const auto strategy = lineSwapStrategy(cell.n);
  const RouteOptions opts{a.trim};
  CellResult out;
  Mapping mapping;
  if (cell.method == "trivial") {
    mapping = trivialMapping(program, strategy);
  } else if (cell.method == "random") {
    mapping = bestRandomMapping(program, strategy, a.randomTrials, {cell.seed}).mapping;
  } else if (cell.method == "sat") {
    auto r = binarySearchMapping(program, strategy, SolveBudget(a.budget), backend);
    mapping = std::move(r.mapping);
    out.trace = std::move(r.trace);
  } else {
    const auto plan = spectralPartition(program, std::min(a.clusters, cell.n), {cell.seed});
    auto r = clusteredMapping(program, strategy, plan, SolveBudget(a.budget), backend);
    mapping = std::move(r.mapping);
    out.trace = std::move(r.trace);
  }
  const auto circuit = route(program, strategy, mapping, opts);
  const auto report = verifyRouting(circuit, program, strategy, mapping);
  if (!report) {
    throw Error("routing verification failed: " + report.violation);
  }
  out.swapLayers = circuit.swapLayersUsed;
  out.swapsApplied = circuit.swapsApplied;
  out.cnotCount = circuit.cnotCount;
  out.seconds = secondsSince(t0);
  return out;
}

int runBench(BenchArgs a) {
  for (const auto& m : a.methods) {
    if (methodRank(m) == 4) {
      throw InvalidArgument("unknown method '" + m + "' (trivial, random, sat, clustered)");
    }
  }
  for (const auto& k : a.kinds) {
    if (k != "rr3" && k != "gnp") {
      throw InvalidArgument("--kind must be rr3 or gnp");
    }
  }
  const auto backend = makeBackend(a.solver);
  std::vector<Cell> cells;
  for (const auto& kind : a.kinds) {
    for (auto n : a.sizes) {
      for (auto seed : a.seeds) {
        for (const auto& method : a.methods) {
          cells.push_back({kind, n, seed, method});
        }
      }
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
    return std::tie(x.kind, x.n, x.seed) != std::tie(y.kind, y.n, y.seed)
               ? std::tie(x.kind, x.n, x.seed) < std::tie(y.kind, y.n, y.seed)
               : methodRank(x.method) < methodRank(y.method);
  });

  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex logMutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        results[i] = runCell(cells[i], a, backend);
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
      std::lock_guard lock(logMutex);
      std::cerr << cells[i].kind << " n=" << cells[i].n << " seed=" << cells[i].seed << " "
                << cells[i].method << ": "
                << (results[i].error.empty() ? "layers " + std::to_string(results[i].swapLayers)
                                             : "error " + results[i].error)
                << "\n";
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < std::max<std::size_t>(1, a.jobs); ++j) {
    pool.emplace_back(worker);
  }
  for (auto& t : pool) {
    t.join();
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!results[i].error.empty()) {
      throw Error("bench cell " + cells[i].kind + "/" + std::to_string(cells[i].n) + "/" +
                  std::to_string(cells[i].seed) + "/" + cells[i].method +
                  " failed: " + results[i].error);
    }
  }

  // eta compares against the random baseline of the same graph
  auto randomCnot = [&](const Cell& c) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].method == "random" && cells[i].kind == c.kind && cells[i].n == c.n &&
          cells[i].seed == c.seed) {
        return results[i].cnotCount;
      }
    }
    Cell r = c;
    r.method = "random";
    return runCell(r, a, backend).cnotCount;
  };

  std::string csv =
      "graph_kind,n,seed,method,swap_layers,swaps_applied,cnot_count,eta,wall_seconds\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    const auto& r = results[i];
    std::string eta;
    if (c.method == "sat") {
      const auto base = randomCnot(c);
      std::ostringstream ss;
      ss.setf(std::ios::fixed);
      ss.precision(3);
      ss << (base == 0 ? 1.0 : static_cast<double>(r.cnotCount) / static_cast<double>(base));
      eta = ss.str();
    }
    csv += c.kind + "," + std::to_string(c.n) + "," + std::to_string(c.seed) + "," + c.method +
           "," + std::to_string(r.swapLayers) + "," + std::to_string(r.swapsApplied) + "," +
           std::to_string(r.cnotCount) + "," + eta + "," + io::formatSeconds(r.seconds) + "\n";
    if (!a.traceDir.empty() && !r.trace.empty()) {
      emit(fs::path(a.traceDir) / (c.kind + "_" + std::to_string(c.n) + "_" +
                                   std::to_string(c.seed) + "_" + c.method + ".csv"),
           io::traceCsv(r.trace));
    }
  }
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    emit(a.out, csv);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Initial qubit mapping for swap strategies via SAT"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* cGen = app.add_subcommand("generate", "write a random program graph");
  cGen->add_option("--kind", gen.kind, "rr3 or gnp")->check(CLI::IsMember({"rr3", "gnp"}));
  cGen->add_option("--n", gen.n, "number of nodes")->required();
  cGen->add_option("--p", gen.p, "edge probability for gnp");
  cGen->add_option("--seed", gen.seed, "generator seed");
  cGen->add_option("--out", gen.out, "output graph JSON (default: stdout)");

  EncodeArgs enc;
  auto* cEnc = app.add_subcommand("encode", "write the embedding CNF for one depth");
  addCommon(cEnc, enc.common, true);
  cEnc->add_option("--depth", enc.depth, "number of swap layers l")->required();
  cEnc->add_option("--out", enc.out, "output DIMACS file")->required();

  SolveArgs sol;
  auto* cSol = app.add_subcommand("solve", "decide a DIMACS formula");
  cSol->add_option("cnf", sol.cnf, "DIMACS file")->required();
  cSol->add_option("--budget-seconds", sol.budget, "time budget")->check(CLI::PositiveNumber);
  cSol->add_option("--solver", sol.solver, "builtin or external:<cmd>");
  cSol->add_option("--out", sol.out, "model file (v-line format)");

  MapArgs map;
  auto* cMap = app.add_subcommand("map", "find the minimal-depth initial mapping");
  addCommon(cMap, map.common, true);
  cMap->add_option("--clusters", map.clusters, "map spectral clusters one at a time");
  cMap->add_option("--seed", map.seed, "k-means seed for --clusters");
  cMap->add_flag("--check-oracle", map.checkOracle, "cross-check against the exact oracle");
  cMap->add_flag("--scan", map.scan, "decide every depth 0..L and write only the trace");
  cMap->add_option("--out", map.out, "output mapping JSON")->required();
  cMap->add_option("--trace", map.trace, "trace CSV (default: <out>.trace.csv)");

  RouteArgs rt;
  auto* cRoute = app.add_subcommand("route", "schedule the program under the strategy");
  addCommon(cRoute, rt.common, true);
  cRoute->add_option("--mapping", rt.mapping, "mapping JSON (default: trivial)");
  cRoute->add_flag("--trim-dead-swaps", rt.trim, "drop swaps that feed no later gate");
  cRoute->add_option("--out", rt.out, "output circuit JSON");

  OracleTimingArgs ot;
  auto* cOt = app.add_subcommand("oracle-timing", "time the exact oracle at l_min and l_min-1");
  cOt->add_option("--n", ot.sizes, "graph sizes")->expected(1, -1);
  cOt->add_option("--seed", ot.seeds, "seeds")->expected(1, -1);
  cOt->add_option("--p", ot.p, "edge probability");
  cOt->add_option("--budget-seconds", ot.budget, "budget per instance")->check(CLI::PositiveNumber);
  cOt->add_option("--out", ot.out, "output CSV (default: stdout)");

  BenchArgs bench;
  auto* cBench = app.add_subcommand("bench", "sweep graphs, seeds and methods into a CSV");
  cBench->add_option("--kind", bench.kinds, "rr3 and/or gnp")->expected(1, -1);
  cBench->add_option("--n", bench.sizes, "graph sizes")->expected(1, -1);
  cBench->add_option("--seed", bench.seeds, "seeds")->expected(1, -1);
  cBench->add_option("--methods", bench.methods, "trivial random sat clustered")->expected(1, -1);
  cBench->add_option("--p", bench.p, "edge probability for gnp");
  cBench->add_option("--budget-seconds", bench.budget, "budget per SAT instance")
      ->check(CLI::PositiveNumber);
  cBench->add_option("--solver", bench.solver, "builtin or external:<cmd>");
  cBench->add_option("--clusters", bench.clusters, "clusters for the clustered method");
  cBench->add_option("--random-trials", bench.randomTrials, "random mappings tried");
  cBench->add_flag("--trim-dead-swaps", bench.trim, "drop swaps that feed no later gate");
  cBench->add_option("--jobs", bench.jobs, "cells run in parallel");
  cBench->add_option("--out", bench.out, "output CSV (default: stdout)");
  cBench->add_option("--trace-dir", bench.traceDir, "directory for per-cell search traces");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cGen) {
      return runGenerate(gen);
    }
    if (*cEnc) {
      return runEncode(enc);
    }
    if (*cSol) {
      return runSolve(sol);
    }
    if (*cMap) {
      return runMap(map);
    }
    if (*cRoute) {
      return runRoute(rt);
    }
    if (*cOt) {
      return runOracleTiming(ot);
    }
    return runBench(bench);
  } catch (const std::exception& e) {
    removePartialOutputs();
    std::cerr << "swapmap: error: " << e.what() << "\n";
    return 1;
  }
}
