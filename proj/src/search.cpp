#include "gnet/search.hpp"

#include <bit>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gnet/errors.hpp"

namespace gnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Table rows flattened to vectors indexed by gap-compressed mask. Holds
/// the exact table doubles, so totals summed in node order are bitwise
/// equal to table_total.
struct DenseRows {
  int m = 0;
  std::vector<std::vector<double>> rows;

  explicit DenseRows(const LocalScoreTable& table) : m(table.m()) {
    rows.resize(static_cast<std::size_t>(m));
    const std::size_t width = std::size_t{1} << (m - 1);
    for (NodeId v = 0; v < m; ++v) {
      rows[static_cast<std::size_t>(v)].assign(width, kInf);
      for (const auto& [mask, score] : table.row(v)) {
        rows[static_cast<std::size_t>(v)][mask_remove_gap(mask, v)] = score;
      }
    }
  }

  double total(const Dag& dag) const {
    double sum = 0.0;
    for (NodeId v = 0; v < dag.m; ++v) {
      sum += rows[static_cast<std::size_t>(v)]
                 [mask_remove_gap(dag.parents[static_cast<std::size_t>(v)].mask, v)];
    }
    return sum;
  }
};

void require_complete(const LocalScoreTable& table, const char* who) {
  if (table.max_parents() != table.m() - 1) {
    throw InvalidArgument(std::string(who) + " needs a table complete up to m-1 parents");
  }
}

}  // namespace

SearchResult learn_exhaustive(const LocalScoreTable& table) {
  const int m = table.m();
  if (m > 6) throw TooLarge("exhaustive search supports m <= 6");
  require_complete(table, "exhaustive search");
  const DenseRows dense(table);

  Dag best(m);
  double best_score = kInf;
  int best_edges = std::numeric_limits<int>::max();
  // Enumeration is lexicographic in the parent-mask tuple and ties keep
  // the first candidate, which realizes the full tie-break rule.
  for_each_dag(m, [&](const Dag& dag) {
    const double score = dense.total(dag);
    const int edges = dag.edge_count();
    if (score < best_score || (score == best_score && edges < best_edges)) {
      best = dag;
      best_score = score;
      best_edges = edges;
    }
  });

  SearchResult result;
  result.best = std::move(best);
  result.score_nats = table_total(table, result.best);
  result.metric = table.metric();
  result.max_parents = table.max_parents();
  return result;
}

SearchResult learn_dp(const LocalScoreTable& table) {
  const int m = table.m();
  if (m > 25) throw TooLarge("subset DP supports m <= 25");
  const std::size_t width = std::size_t{1} << (m - 1);
  const std::size_t full = std::size_t{1} << m;

  // Stage 1: for every node v and candidate set C (as compressed mask),
  // the best parent set inside C. Ties break toward fewer parents, then
  // the smaller mask; ascending sweep works because subsets of C are
  // numerically smaller than C.
  std::vector<std::vector<double>> bp_score(static_cast<std::size_t>(m));
  std::vector<std::vector<std::uint32_t>> bp_mask(static_cast<std::size_t>(m));
  for (NodeId v = 0; v < m; ++v) {
    auto& score_row = bp_score[static_cast<std::size_t>(v)];
    auto& mask_row = bp_mask[static_cast<std::size_t>(v)];
    score_row.assign(width, kInf);
    mask_row.assign(width, 0);
    for (const auto& [mask, score] : table.row(v)) {
      const std::size_t c = mask_remove_gap(mask, v);
      score_row[c] = score;
      mask_row[c] = static_cast<std::uint32_t>(mask);
    }
    for (std::size_t c = 1; c < width; ++c) {
      for (std::size_t rest = c; rest; rest &= rest - 1) {
        const std::size_t sub = c & ~(rest & (0 - rest));
        const double cand_score = score_row[sub];
        if (cand_score > score_row[c]) continue;
        const std::uint32_t cand_mask = mask_row[sub];
        if (cand_score < score_row[c] ||
            std::popcount(cand_mask) < std::popcount(mask_row[c]) ||
            (std::popcount(cand_mask) == std::popcount(mask_row[c]) &&
             cand_mask < mask_row[c])) {
          score_row[c] = cand_score;
          mask_row[c] = cand_mask;
        }
      }
    }
  }

  // Stage 2: best network over each node subset, peeling one sink at a
  // time. On (score, edges) ties the larger sink index wins, which sends
  // small-index nodes toward emptier parent sets, matching the
  // lexicographic tie-break on realized tables.
  std::vector<double> net_score(full, kInf);
  std::vector<std::uint32_t> net_edges(full, 0);
  std::vector<std::int8_t> net_sink(full, -1);
  net_score[0] = 0.0;
  for (std::size_t subset = 1; subset < full; ++subset) {
    for (std::size_t rest = subset; rest; rest &= rest - 1) {
      const int sink = std::countr_zero(rest);
      const std::size_t remainder = subset & ~(std::size_t{1} << sink);
      const std::size_t c = mask_remove_gap(remainder, sink);
      const double cand_score =
          bp_score[static_cast<std::size_t>(sink)][c] + net_score[remainder];
      if (cand_score > net_score[subset]) continue;
      const std::uint32_t cand_edges =
          static_cast<std::uint32_t>(
              std::popcount(bp_mask[static_cast<std::size_t>(sink)][c])) +
          net_edges[remainder];
      if (cand_score < net_score[subset] || cand_edges <= net_edges[subset]) {
        net_score[subset] = cand_score;
        net_edges[subset] = cand_edges;
        net_sink[subset] = static_cast<std::int8_t>(sink);
      }
    }
  }

  if (net_score[full - 1] == kInf) {
    throw InvalidArgument("subset DP needs a table complete up to its max_parents");
  }

  Dag best(m);
  std::size_t subset = full - 1;
  while (subset) {
    const int sink = net_sink[subset];
    const std::size_t remainder = subset & ~(std::size_t{1} << sink);
    const std::size_t c = mask_remove_gap(remainder, sink);
    best.parents[static_cast<std::size_t>(sink)].mask =
        bp_mask[static_cast<std::size_t>(sink)][c];
    subset = remainder;
  }

  SearchResult result;
  result.best = std::move(best);
  result.score_nats = table_total(table, result.best);
  result.metric = table.metric();
  result.max_parents = table.max_parents();
  return result;
}

long long rank_of(const Dag& reference, const LocalScoreTable& table) {
  const int m = table.m();
  if (m > 5) throw TooLarge("rank computation supports m <= 5");
  require_complete(table, "rank computation");
  if (reference.m != m) {
    throw DimensionMismatch("reference graph and table disagree on node count");
  }
  validate_acyclic(reference);
  const DenseRows dense(table);
  const double reference_score = table_total(table, reference);
  long long smaller = 0;
  for (const Dag& dag : enumerate_dags_cached(m)) {
    if (dense.total(dag) < reference_score) ++smaller;
  }
  return 1 + smaller;
}

}  // namespace gnet
