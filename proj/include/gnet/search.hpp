#pragma once

#include "gnet/graph.hpp"
#include "gnet/scoring.hpp"

namespace gnet {

struct SearchResult {
  Dag best;
  double score_nats = 0.0;
  MetricId metric = MetricId::RnmlExact;
  int max_parents = 0;
};

/// Global minimum by scoring every DAG in enumeration order. Ties break
/// toward fewer edges, then the lexicographically smallest parent-mask
/// tuple (the enumeration order itself). Needs a table complete up to
/// max_parents = m-1; m <= 6.
SearchResult learn_exhaustive(const LocalScoreTable& table);

/// Same optimum by dynamic programming over node subsets: per-node best
/// parent sets on the subset lattice, then a best-sink sweep. Ties break
/// as in learn_exhaustive. m <= 25; respects the table's max_parents.
SearchResult learn_dp(const LocalScoreTable& table);

/// 1-based position of `reference` when all DAGs on m nodes are ordered
/// by total score: 1 + the number of DAGs scoring strictly lower. Needs
/// a complete table; m <= 5.
long long rank_of(const Dag& reference, const LocalScoreTable& table);

}  // namespace gnet
