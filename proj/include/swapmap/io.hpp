#pragma once

#include "swapmap/clustering.hpp"
#include "swapmap/error.hpp"
#include "swapmap/graph.hpp"
#include "swapmap/mapping.hpp"
#include "swapmap/mapping_search.hpp"
#include "swapmap/router.hpp"
#include "swapmap/swap_strategy.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace swapmap::io {

using Json = nlohmann::ordered_json;

inline std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a temporary sibling and renames, so readers never see a
/// half-written file and failures leave nothing behind.
inline void writeFileAtomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error("cannot write " + tmp.string());
    }
    out << content;
    if (!out.flush()) {
      std::filesystem::remove(tmp);
      throw Error("cannot write " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

namespace detail {

inline Json parseJson(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline const Json& field(const Json& obj, const char* name, const std::string& ctx) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw ParseError(ctx + ": missing field \"" + name + "\"");
  }
  return obj.at(name);
}

inline std::size_t asCount(const Json& j, const std::string& ctx) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ParseError(ctx + ": expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

inline Edge asPair(const Json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError(ctx + ": expected a pair [a, b]");
  }
  const auto a = asCount(j[0], ctx + "[0]");
  const auto b = asCount(j[1], ctx + "[1]");
  return {static_cast<Node>(a), static_cast<Node>(b)};
}

inline Json pairsJson(const std::vector<Edge>& pairs) {
  Json arr = Json::array();
  for (const auto& e : pairs) {
    arr.push_back({e.u, e.v});
  }
  return arr;
}

} // namespace detail

// ---- graphs -----------------------------------------------------------------

inline Json graphToJson(const Graph& g) {
  Json j;
  j["num_nodes"] = g.numNodes();
  j["edges"] = detail::pairsJson(g.edges());
  return j;
}

inline Graph graphFromJson(const Json& j, const std::string& ctx = "graph") {
  const auto n = detail::asCount(detail::field(j, "num_nodes", ctx), ctx + ".num_nodes");
  const auto& edgesJson = detail::field(j, "edges", ctx);
  if (!edgesJson.is_array()) {
    throw ParseError(ctx + ".edges: expected an array");
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < edgesJson.size(); ++i) {
    const auto where = ctx + ".edges[" + std::to_string(i) + "]";
    const auto e = detail::asPair(edgesJson[i], where);
    if (e.u == e.v) {
      throw ParseError(where + ": self-loop on node " + std::to_string(e.u));
    }
    if (e.v >= n) {
      throw ParseError(where + ": node " + std::to_string(e.v) + " >= num_nodes " +
                       std::to_string(n));
    }
    edges.push_back(e);
  }
  auto sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
    throw ParseError(ctx + ".edges: duplicate edge [" + std::to_string(dup->u) + "," +
                     std::to_string(dup->v) + "]");
  }
  return {n, std::move(edges)};
}

inline std::string graphText(const Graph& g) { return graphToJson(g).dump() + "\n"; }

inline Graph parseGraph(const std::string& text, const std::string& source = "graph") {
  return graphFromJson(detail::parseJson(text, source), source);
}

inline Graph readGraph(const std::filesystem::path& path) {
  return parseGraph(readFile(path), path.string());
}

inline void writeGraph(const Graph& g, const std::filesystem::path& path) {
  writeFileAtomic(path, graphText(g));
}

// ---- swap strategies ----------------------------------------------------------

inline Json strategyToJson(const SwapStrategy& s) {
  Json j;
  j["coupling"] = graphToJson(s.coupling());
  Json layers = Json::array();
  for (const auto& layer : s.layers()) {
    layers.push_back(detail::pairsJson(layer.swaps));
  }
  j["layers"] = std::move(layers);
  j["order"] = s.order();
  return j;
}

inline SwapStrategy strategyFromJson(const Json& j, const std::string& ctx = "strategy") {
  auto coupling = graphFromJson(detail::field(j, "coupling", ctx), ctx + ".coupling");
  const auto& layersJson = detail::field(j, "layers", ctx);
  if (!layersJson.is_array()) {
    throw ParseError(ctx + ".layers: expected an array");
  }
  std::vector<SwapLayer> layers;
  for (std::size_t i = 0; i < layersJson.size(); ++i) {
    const auto where = ctx + ".layers[" + std::to_string(i) + "]";
    if (!layersJson[i].is_array()) {
      throw ParseError(where + ": expected an array of pairs");
    }
    SwapLayer layer;
    for (std::size_t k = 0; k < layersJson[i].size(); ++k) {
      layer.swaps.push_back(
          detail::asPair(layersJson[i][k], where + "[" + std::to_string(k) + "]"));
    }
    layers.push_back(std::move(layer));
  }
  const auto& orderJson = detail::field(j, "order", ctx);
  if (!orderJson.is_array()) {
    throw ParseError(ctx + ".order: expected an array");
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < orderJson.size(); ++i) {
    order.push_back(detail::asCount(orderJson[i], ctx + ".order[" + std::to_string(i) + "]"));
  }
  try {
    return {std::move(coupling), std::move(layers), std::move(order)};
  } catch (const InvalidArgument& e) {
    throw ParseError(ctx + ": " + e.what());
  }
}

inline SwapStrategy readStrategy(const std::filesystem::path& path) {
  return strategyFromJson(detail::parseJson(readFile(path), path.string()), path.string());
}

inline void writeStrategy(const SwapStrategy& s, const std::filesystem::path& path) {
  writeFileAtomic(path, strategyToJson(s).dump() + "\n");
}

// ---- mappings -------------------------------------------------------------------

inline std::string mappingText(const Mapping& m, std::optional<std::size_t> lMin) {
  Json j;
  j["assignment"] = m.assignment;
  if (lMin) {
    j["l_min"] = *lMin;
  }
  return j.dump() + "\n";
}

inline std::pair<Mapping, std::optional<std::size_t>> parseMapping(
    const std::string& text, const std::string& source = "mapping") {
  const auto j = detail::parseJson(text, source);
  const auto& arr = detail::field(j, "assignment", source);
  if (!arr.is_array()) {
    throw ParseError(source + ".assignment: expected an array");
  }
  Mapping m;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    m.assignment.push_back(static_cast<Node>(
        detail::asCount(arr[i], source + ".assignment[" + std::to_string(i) + "]")));
  }
  std::optional<std::size_t> lMin;
  if (j.contains("l_min")) {
    lMin = detail::asCount(j.at("l_min"), source + ".l_min");
  }
  return {std::move(m), lMin};
}

inline std::pair<Mapping, std::optional<std::size_t>> readMapping(
    const std::filesystem::path& path) {
  return parseMapping(readFile(path), path.string());
}

// ---- circuits ---------------------------------------------------------------------

inline Json circuitToJson(const RoutedCircuit& c) {
  Json rounds = Json::array();
  for (const auto& r : c.rounds) {
    Json jr;
    if (r.kind == Round::Kind::Gates) {
      jr["type"] = "gates";
      jr["edges"] = detail::pairsJson(r.pairs);
    } else {
      jr["type"] = "swaps";
      jr["layer"] = r.layerIndex;
      jr["pairs"] = detail::pairsJson(r.pairs);
    }
    rounds.push_back(std::move(jr));
  }
  Json j;
  j["rounds"] = std::move(rounds);
  j["metrics"] = {{"swap_layers", c.swapLayersUsed},
                  {"swaps_applied", c.swapsApplied},
                  {"cnot_count", c.cnotCount},
                  {"program_gates", c.programGateCount},
                  {"trimmed", c.trimmed}};
  return j;
}

inline RoutedCircuit circuitFromJson(const Json& j, const std::string& ctx = "circuit") {
  RoutedCircuit c;
  const auto& rounds = detail::field(j, "rounds", ctx);
  if (!rounds.is_array()) {
    throw ParseError(ctx + ".rounds: expected an array");
  }
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const auto where = ctx + ".rounds[" + std::to_string(i) + "]";
    const auto& jr = rounds[i];
    const auto& type = detail::field(jr, "type", where);
    Round r;
    const char* listName = nullptr;
    if (type == "gates") {
      r.kind = Round::Kind::Gates;
      listName = "edges";
    } else if (type == "swaps") {
      r.kind = Round::Kind::Swaps;
      listName = "pairs";
      r.layerIndex = detail::asCount(detail::field(jr, "layer", where), where + ".layer");
    } else {
      throw ParseError(where + ".type: expected \"gates\" or \"swaps\"");
    }
    const auto& list = detail::field(jr, listName, where);
    if (!list.is_array()) {
      throw ParseError(where + "." + listName + ": expected an array");
    }
    for (std::size_t k = 0; k < list.size(); ++k) {
      r.pairs.push_back(
          detail::asPair(list[k], where + "." + listName + "[" + std::to_string(k) + "]"));
    }
    c.rounds.push_back(std::move(r));
  }
  if (j.contains("metrics")) {
    const auto& m = j.at("metrics");
    const auto count = [&](const char* name) {
      return detail::asCount(detail::field(m, name, ctx + ".metrics"),
                             ctx + ".metrics." + name);
    };
    c.swapLayersUsed = count("swap_layers");
    c.swapsApplied = count("swaps_applied");
    c.cnotCount = count("cnot_count");
    c.programGateCount = count("program_gates");
    c.trimmed = m.value("trimmed", false);
  }
  return c;
}

inline std::string circuitText(const RoutedCircuit& c) { return circuitToJson(c).dump() + "\n"; }

/// One gate per line: `ZZ u v` for program gates, `SWAP a b` for swaps.
inline std::string circuitGateList(const RoutedCircuit& c) {
  std::string out;
  for (const auto& r : c.rounds) {
    for (const auto& p : r.pairs) {
      out += (r.kind == Round::Kind::Gates ? "ZZ " : "SWAP ") + std::to_string(p.u) + " " +
             std::to_string(p.v) + "\n";
    }
  }
  return out;
}

// ---- cluster plans -------------------------------------------------------------------

inline std::string clusterPlanText(const ClusterPlan& plan) {
  Json j;
  j["clusters"] = plan.clusters;
  return j.dump() + "\n";
}

inline ClusterPlan parseClusterPlan(const std::string& text,
                                    const std::string& source = "clusters") {
  const auto j = detail::parseJson(text, source);
  const auto& arr = detail::field(j, "clusters", source);
  if (!arr.is_array()) {
    throw ParseError(source + ".clusters: expected an array");
  }
  ClusterPlan plan;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto where = source + ".clusters[" + std::to_string(i) + "]";
    if (!arr[i].is_array()) {
      throw ParseError(where + ": expected an array of nodes");
    }
    std::vector<Node> cluster;
    for (std::size_t k = 0; k < arr[i].size(); ++k) {
      cluster.push_back(static_cast<Node>(
          detail::asCount(arr[i][k], where + "[" + std::to_string(k) + "]")));
    }
    plan.clusters.push_back(std::move(cluster));
  }
  return plan;
}

// ---- traces --------------------------------------------------------------------------

inline std::string formatSeconds(double s) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(3) << s;
  return ss.str();
}

/// CSV with header `l,status,seconds`; seconds carry three decimals.
inline std::string traceCsv(const std::vector<TraceEntry>& trace) {
  std::string out = "l,status,seconds\n";
  for (const auto& t : trace) {
    out += std::to_string(t.l) + "," + std::string(toString(t.status)) + "," +
           formatSeconds(t.seconds) + "\n";
  }
  return out;
}

} // namespace swapmap::io
