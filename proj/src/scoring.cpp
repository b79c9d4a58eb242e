#include "gnet/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "gnet/errors.hpp"
#include "gnet/fmtutil.hpp"

namespace gnet {

namespace {

double log_2_pi_e() {
  static const double value = std::log(2.0 * std::numbers::pi * std::numbers::e);
  return value;
}

}  // namespace

std::string_view metric_name(MetricId metric) {
  switch (metric) {
    case MetricId::RnmlExact:
      return "rnml";
    case MetricId::RnmlStirling:
      return "rnml-stirling";
    case MetricId::Mdl3:
      return "mdl3";
    case MetricId::Bic:
      return "bic";
    case MetricId::Aic:
      return "aic";
  }
  throw InvalidArgument("unknown metric id");
}

MetricId parse_metric(std::string_view name) {
  for (MetricId metric : kAllMetrics) {
    if (metric_name(metric) == name) return metric;
  }
  throw InvalidArgument("unknown metric: " + std::string(name));
}

double local_score(MetricId metric, const LocalFit& fit, int m, const ScoreOptions& options,
                   ScoreDiagnostics* diagnostics) {
  if (m < 1) throw InvalidArgument("network node count must be >= 1");
  if (fit.n <= fit.k) {
    throw InsufficientSamples("need n > k; n=" + std::to_string(fit.n) +
                              " k=" + std::to_string(fit.k));
  }
  const double n = static_cast<double>(fit.n);
  const int k_int = options.intercept_in_k ? fit.k : fit.k - 1;
  const double k = static_cast<double>(k_int);
  const bool uses_r = metric == MetricId::RnmlExact || metric == MetricId::RnmlStirling;
  if (uses_r && k_int < 1) {
    throw DegenerateFit("refined metrics need k >= 1");
  }

  double tau = fit.tau_hat;
  if (tau < options.tau_floor) {
    if (options.strict_degenerate) {
      throw DegenerateFit("tau_hat below floor for node " + std::to_string(fit.node));
    }
    tau = options.tau_floor;
    if (diagnostics) ++diagnostics->tau_substitutions;
  }
  double r = fit.r_hat;
  if (uses_r && r < options.r_floor) {
    if (options.strict_degenerate) {
      throw DegenerateFit("r_hat below floor for node " + std::to_string(fit.node));
    }
    r = options.r_floor;
    if (diagnostics) ++diagnostics->r_substitutions;
  }

  switch (metric) {
    case MetricId::Mdl3:
      return 0.5 * n * (log_2_pi_e() + std::log(tau)) +
             k * (0.5 * std::log(n) + std::log(static_cast<double>(m)));
    case MetricId::Bic:
      return 0.5 * n * (log_2_pi_e() + std::log(tau)) + 0.5 * k * std::log(n);
    case MetricId::Aic:
      return 0.5 * n * (log_2_pi_e() + std::log(tau)) + k;
    case MetricId::RnmlExact:
      return 0.5 * n * std::log(tau) - std::lgamma(0.5 * k) - std::lgamma(0.5 * (n - k)) +
             0.5 * k * std::log(r / tau);
    case MetricId::RnmlStirling:
      return (n - k) * std::log(tau / (n - k)) + k * std::log(r / k) + std::log(k * (n - k));
  }
  throw InvalidArgument("unknown metric id");
}

double total_score(MetricId metric, const DataMatrix& data, const Dag& dag,
                   const ScoreOptions& options, ScoreDiagnostics* diagnostics) {
  if (dag.m != data.m()) {
    throw DimensionMismatch("graph has " + std::to_string(dag.m) + " nodes but data has " +
                            std::to_string(data.m()) + " variables");
  }
  validate_acyclic(dag);
  double total = 0.0;
  for (NodeId v = 0; v < dag.m; ++v) {
    const LocalFit fit = fit_local(data, v, dag.parents[static_cast<std::size_t>(v)]);
    total += local_score(metric, fit, dag.m, options, diagnostics);
  }
  return total;
}

LocalScoreTable::LocalScoreTable(MetricId metric, int m, int max_parents)
    : metric_(metric), m_(m), max_parents_(max_parents) {
  if (m < 1) throw InvalidArgument("table needs m >= 1");
  if (m > 64) throw TooLarge("tables support at most 64 nodes");
  if (max_parents < 0 || max_parents > m - 1) {
    throw InvalidArgument("max_parents must lie in [0, m-1]");
  }
  rows_.resize(static_cast<std::size_t>(m));
}

void LocalScoreTable::insert(NodeId node, std::uint64_t parent_mask, double score_nats) {
  if (node < 0 || node >= m_) throw InvalidArgument("node out of range");
  if ((parent_mask >> node) & 1u) throw InvalidArgument("node cannot be its own parent");
  if (m_ < 64 && (parent_mask >> m_) != 0) {
    throw InvalidArgument("parent mask references a node out of range");
  }
  if (std::popcount(parent_mask) > max_parents_) {
    throw InvalidArgument("parent set exceeds max_parents");
  }
  rows_[static_cast<std::size_t>(node)][parent_mask] = score_nats;
}

bool LocalScoreTable::contains(NodeId node, std::uint64_t parent_mask) const {
  if (node < 0 || node >= m_) return false;
  const auto& row = rows_[static_cast<std::size_t>(node)];
  return row.find(parent_mask) != row.end();
}

double LocalScoreTable::at(NodeId node, std::uint64_t parent_mask) const {
  if (node < 0 || node >= m_) throw InvalidArgument("node out of range");
  const auto& row = rows_[static_cast<std::size_t>(node)];
  const auto it = row.find(parent_mask);
  if (it == row.end()) {
    throw InvalidArgument("no score entry for node " + std::to_string(node) + ", mask " +
                          std::to_string(parent_mask));
  }
  return it->second;
}

const std::unordered_map<std::uint64_t, double>& LocalScoreTable::row(NodeId node) const {
  if (node < 0 || node >= m_) throw InvalidArgument("node out of range");
  return rows_[static_cast<std::size_t>(node)];
}

std::size_t LocalScoreTable::size() const {
  std::size_t total = 0;
  for (const auto& row : rows_) total += row.size();
  return total;
}

std::vector<LocalScoreTable> build_tables(const std::vector<MetricId>& metrics,
                                          const DataMatrix& data, int max_parents,
                                          const ScoreOptions& options) {
  if (metrics.empty()) throw InvalidArgument("need at least one metric");
  const int m = data.m();
  if (max_parents < 0 || max_parents > m - 1) {
    throw InvalidArgument("max_parents must lie in [0, m-1]");
  }
  if (data.n() <= static_cast<long>(max_parents) + 1) {
    throw InsufficientSamples("need n > max_parents + 1");
  }
  std::vector<LocalScoreTable> tables;
  tables.reserve(metrics.size());
  for (MetricId metric : metrics) tables.emplace_back(metric, m, max_parents);

  for (NodeId v = 0; v < m; ++v) {
    std::vector<NodeId> candidates;
    candidates.reserve(static_cast<std::size_t>(m - 1));
    for (NodeId j = 0; j < m; ++j) {
      if (j != v) candidates.push_back(j);
    }
    auto score_mask = [&](std::uint64_t mask) {
      const LocalFit fit = fit_local(data, v, ParentSet{mask});
      for (std::size_t t = 0; t < metrics.size(); ++t) {
        ScoreDiagnostics diag;
        const double value = local_score(metrics[t], fit, m, options, &diag);
        tables[t].insert(v, mask, value);
        tables[t].degenerate_substitutions += diag.tau_substitutions + diag.r_substitutions;
      }
    };
    score_mask(0);
    // Subsets by ascending size, lexicographic within a size.
    for (int s = 1; s <= max_parents; ++s) {
      std::vector<int> pick(static_cast<std::size_t>(s));
      for (int t = 0; t < s; ++t) pick[static_cast<std::size_t>(t)] = t;
      const int c = static_cast<int>(candidates.size());
      while (true) {
        std::uint64_t mask = 0;
        for (int t = 0; t < s; ++t) {
          mask |= std::uint64_t{1} << candidates[static_cast<std::size_t>(
                      pick[static_cast<std::size_t>(t)])];
        }
        score_mask(mask);
        int pos = s - 1;
        while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == c - s + pos) --pos;
        if (pos < 0) break;
        ++pick[static_cast<std::size_t>(pos)];
        for (int t = pos + 1; t < s; ++t) {
          pick[static_cast<std::size_t>(t)] = pick[static_cast<std::size_t>(t - 1)] + 1;
        }
      }
    }
  }
  return tables;
}

LocalScoreTable build_table(MetricId metric, const DataMatrix& data, int max_parents,
                            const ScoreOptions& options) {
  std::vector<LocalScoreTable> tables = build_tables({metric}, data, max_parents, options);
  return std::move(tables.front());
}

double table_total(const LocalScoreTable& table, const Dag& dag) {
  if (dag.m != table.m()) {
    throw DimensionMismatch("graph and score table disagree on node count");
  }
  double total = 0.0;
  for (NodeId v = 0; v < dag.m; ++v) {
    total += table.at(v, dag.parents[static_cast<std::size_t>(v)].mask);
  }
  return total;
}

void write_table_csv(const LocalScoreTable& table, std::ostream& out) {
  out << "node,parent_mask,k,score_nats\n";
  for (NodeId v = 0; v < table.m(); ++v) {
    std::vector<std::pair<std::uint64_t, double>> entries(table.row(v).begin(),
                                                          table.row(v).end());
    std::sort(entries.begin(), entries.end());
    for (const auto& [mask, score] : entries) {
      out << v << ',' << mask << ',' << (std::popcount(mask) + 1) << ',' << g17(score) << '\n';
    }
  }
}

}  // namespace gnet
