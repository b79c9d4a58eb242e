#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gnet/data.hpp"
#include "gnet/graph.hpp"
#include "gnet/regress.hpp"

namespace gnet {

/// The five decomposable metrics, all in nats, lower is better.
enum class MetricId { RnmlExact, RnmlStirling, Mdl3, Bic, Aic };

inline constexpr std::array<MetricId, 5> kAllMetrics = {
    MetricId::RnmlExact, MetricId::RnmlStirling, MetricId::Mdl3, MetricId::Bic, MetricId::Aic};

std::string_view metric_name(MetricId metric);
MetricId parse_metric(std::string_view name);  // throws InvalidArgument

struct ScoreOptions {
  double tau_floor = 1e-12;  // substituted for smaller tau_hat before logs
  double r_floor = 1e-12;    // likewise for r_hat where the metric uses it
  bool strict_degenerate = false;  // throw DegenerateFit instead of substituting
  bool intercept_in_k = true;      // k counts the intercept regressor
};

struct ScoreDiagnostics {
  long long tau_substitutions = 0;
  long long r_substitutions = 0;
};

/// Local score of one fitted node in nats. m is the network's node
/// count (the Mdl3 pointer term needs it). Requires fit.n > fit.k.
double local_score(MetricId metric, const LocalFit& fit, int m, const ScoreOptions& options = {},
                   ScoreDiagnostics* diagnostics = nullptr);

/// Sum of local scores over nodes 0..m-1 in index order; fits every node
/// against data. Validates the dag first.
double total_score(MetricId metric, const DataMatrix& data, const Dag& dag,
                   const ScoreOptions& options = {}, ScoreDiagnostics* diagnostics = nullptr);

/// All local scores of one metric for every (node, parent set) with
/// |parents| <= max_parents. Plain container; search reads it, tests
/// and simulators may fill it directly.
class LocalScoreTable {
 public:
  LocalScoreTable(MetricId metric, int m, int max_parents);

  MetricId metric() const { return metric_; }
  int m() const { return m_; }
  int max_parents() const { return max_parents_; }

  void insert(NodeId node, std::uint64_t parent_mask, double score_nats);
  bool contains(NodeId node, std::uint64_t parent_mask) const;
  double at(NodeId node, std::uint64_t parent_mask) const;  // throws InvalidArgument if absent
  const std::unordered_map<std::uint64_t, double>& row(NodeId node) const;
  std::size_t size() const;

  /// Substitutions applied while building this table (degenerate fits).
  long long degenerate_substitutions = 0;

 private:
  MetricId metric_;
  int m_;
  int max_parents_;
  std::vector<std::unordered_map<std::uint64_t, double>> rows_;
};

/// Builds tables for several metrics in one sweep, fitting each
/// (node, parent set) exactly once, so per-entry arithmetic is identical
/// to a single-metric build. Requires 0 <= max_parents <= m-1 and
/// n > max_parents + 1.
std::vector<LocalScoreTable> build_tables(const std::vector<MetricId>& metrics,
                                          const DataMatrix& data, int max_parents,
                                          const ScoreOptions& options = {});

LocalScoreTable build_table(MetricId metric, const DataMatrix& data, int max_parents,
                            const ScoreOptions& options = {});

/// Network score of dag under a prebuilt table: sum of table entries in
/// node index order. The canonical summation all search code shares.
double table_total(const LocalScoreTable& table, const Dag& dag);

/// Debug export: node,parent_mask,k,score_nats rows sorted by (node,
/// mask), 17 significant digits.
void write_table_csv(const LocalScoreTable& table, std::ostream& out);

}  // namespace gnet
