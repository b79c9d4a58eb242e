#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "gnet/graph.hpp"
#include "gnet/search.hpp"
#include "gnet/sim.hpp"

namespace gnet {

/// {"m": int, "edges": [[from, to], ...]}. The reader rejects
/// out-of-range endpoints, self loops, duplicate edges (ParseError) and
/// cycles (CycleError).
nlohmann::json dag_to_json(const Dag& dag);
Dag dag_from_json(const nlohmann::json& j);

/// {"mu": [...], "tau": [...], "b": [[i, j, value], ...]} where b maps
/// (child i, parent j) to the coefficient.
nlohmann::json params_to_json(const GaussianParams& params);
GaussianParams params_from_json(const nlohmann::json& j);

/// {"metric": name, "score_nats": total, "dag": {...}}.
nlohmann::json search_result_to_json(const SearchResult& result);

/// File helpers; parse failures surface as ParseError naming the path.
nlohmann::json load_json_file(const std::string& path);
Dag load_dag_file(const std::string& path);
GaussianParams load_params_file(const std::string& path);
void save_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace gnet
