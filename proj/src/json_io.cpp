#include "gnet/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "gnet/errors.hpp"

namespace gnet {

using nlohmann::json;

json dag_to_json(const Dag& dag) {
  json edges = json::array();
  for (const auto& [from, to] : dag.edges()) {
    edges.push_back(json::array({from, to}));
  }
  return json{{"m", dag.m}, {"edges", std::move(edges)}};
}

Dag dag_from_json(const json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("edges")) {
    throw ParseError("graph JSON needs keys 'm' and 'edges'");
  }
  if (!j["m"].is_number_integer()) throw ParseError("'m' must be an integer");
  const int m = j["m"].get<int>();
  if (m < 1) throw ParseError("'m' must be >= 1");
  if (m > 64) throw TooLarge("graphs support at most 64 nodes");
  if (!j["edges"].is_array()) throw ParseError("'edges' must be an array");
  Dag dag(m);
  std::set<std::pair<int, int>> seen;
  for (const json& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      throw ParseError("each edge must be a [from, to] integer pair");
    }
    const int from = e[0].get<int>();
    const int to = e[1].get<int>();
    if (from < 0 || from >= m || to < 0 || to >= m) {
      throw ParseError("edge endpoint out of range: [" + std::to_string(from) + ", " +
                       std::to_string(to) + "]");
    }
    if (from == to) {
      throw ParseError("self loop at node " + std::to_string(from));
    }
    if (!seen.insert({from, to}).second) {
      throw ParseError("duplicate edge [" + std::to_string(from) + ", " + std::to_string(to) +
                       "]");
    }
    dag.add_edge(from, to);
  }
  validate_acyclic(dag);  // throws CycleError on cyclic input
  return dag;
}

json params_to_json(const GaussianParams& params) {
  json b = json::array();
  for (NodeId v = 0; v < params.m(); ++v) {
    for (const auto& [j_parent, value] : params.coef[static_cast<std::size_t>(v)]) {
      b.push_back(json::array({v, j_parent, value}));
    }
  }
  return json{{"mu", params.mu}, {"tau", params.tau}, {"b", std::move(b)}};
}

GaussianParams params_from_json(const json& j) {
  if (!j.is_object() || !j.contains("mu") || !j.contains("tau") || !j.contains("b")) {
    throw ParseError("parameter JSON needs keys 'mu', 'tau' and 'b'");
  }
  GaussianParams params;
  try {
    params.mu = j["mu"].get<std::vector<double>>();
    params.tau = j["tau"].get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ParseError("'mu' and 'tau' must be arrays of reals");
  }
  const int m = params.m();
  if (m < 1) throw ParseError("'mu' must be non-empty");
  if (static_cast<int>(params.tau.size()) != m) {
    throw ParseError("'mu' and 'tau' must have equal length");
  }
  for (double v : params.mu) {
    if (!std::isfinite(v)) throw ParseError("non-finite entry in 'mu'");
  }
  for (double v : params.tau) {
    if (!std::isfinite(v) || v <= 0.0) throw ParseError("'tau' entries must be positive reals");
  }
  params.coef.resize(static_cast<std::size_t>(m));
  if (!j["b"].is_array()) throw ParseError("'b' must be an array of [i, j, value] triples");
  std::set<std::pair<int, int>> seen;
  for (const json& t : j["b"]) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() ||
        !t[1].is_number_integer() || !t[2].is_number()) {
      throw ParseError("'b' entries must be [i, j, value] triples");
    }
    const int child = t[0].get<int>();
    const int parent = t[1].get<int>();
    const double value = t[2].get<double>();
    if (child < 0 || child >= m || parent < 0 || parent >= m || child == parent) {
      throw ParseError("invalid coefficient key [" + std::to_string(child) + ", " +
                       std::to_string(parent) + "]");
    }
    if (!std::isfinite(value)) throw ParseError("non-finite coefficient");
    if (!seen.insert({child, parent}).second) {
      throw ParseError("duplicate coefficient key [" + std::to_string(child) + ", " +
                       std::to_string(parent) + "]");
    }
    params.coef[static_cast<std::size_t>(child)].emplace_back(parent, value);
  }
  for (auto& row : params.coef) {
    std::sort(row.begin(), row.end());
  }
  return params;
}

json search_result_to_json(const SearchResult& result) {
  return json{{"metric", std::string(metric_name(result.metric))},
              {"score_nats", result.score_nats},
              {"dag", dag_to_json(result.best)}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Dag load_dag_file(const std::string& path) {
  const json j = load_json_file(path);
  try {
    return dag_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

GaussianParams load_params_file(const std::string& path) {
  const json j = load_json_file(path);
  try {
    return params_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace gnet
