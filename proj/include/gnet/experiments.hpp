#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gnet/scoring.hpp"

namespace gnet {

/// Rank-convergence study: per iteration draw one network uniformly,
/// draw parameters, then for each sample size draw a fresh data set and
/// record the true structure's score rank among all DAGs.
struct RankConfig {
  int m = 4;
  std::vector<long> sample_sizes = {25, 50, 100, 200, 500, 1000};
  int iterations = 500;
  std::vector<MetricId> metrics = {MetricId::RnmlExact, MetricId::Mdl3, MetricId::Bic,
                                   MetricId::Aic};
  std::uint64_t seed = 0;
};

/// Structure-recovery study: per cell (m, nn, n) and iteration draw a
/// sparse network, parameters, one data set; learn with each metric by
/// subset DP (parent sets capped at the generating network's maximum
/// in-degree, floor 1) and record the structural Hamming distance.
struct ShdConfig {
  std::vector<int> node_counts = {8, 10, 15};
  std::vector<double> neighbor_counts = {2, 4, 6};
  std::vector<long> sample_sizes = {50, 500, 1000};
  int iterations = 100;
  std::vector<MetricId> metrics = {MetricId::RnmlExact, MetricId::Mdl3, MetricId::Bic,
                                   MetricId::Aic};
  std::uint64_t seed = 0;
};

/// One observation: statistic is "rank" or "shd", or "failure" with
/// value 1 when an iteration's computation threw. nn is absent for rank
/// rows.
struct ResultRow {
  MetricId metric = MetricId::RnmlExact;
  int m = 0;
  bool has_nn = false;
  double nn = 0.0;
  long n = 0;
  int iteration = 0;
  std::string statistic;
  double value = 0.0;
};

struct SummaryRow {
  MetricId metric = MetricId::RnmlExact;
  int m = 0;
  bool has_nn = false;
  double nn = 0.0;
  long n = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  long count = 0;
  long failures = 0;
};

/// Aggregated difference of mean SHD between a baseline metric pair,
/// paired per iteration and pooled over cells with the same n.
struct ShdGapRow {
  std::string comparison;
  long n = 0;
  double mean_gap = 0.0;
  double stderr_mean = 0.0;
  long pairs = 0;
  long incomplete = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;

  std::vector<SummaryRow> summarize() const;
  void write_rows_csv(std::ostream& out) const;
  /// Per-cell summary; for SHD results the pooled per-n gap rows
  /// (mdl3_minus_rnml, min_aic_bic_minus_rnml) follow, computed from the
  /// same rows.
  void write_summary_csv(std::ostream& out) const;
};

std::vector<ShdGapRow> shd_gaps(const ExperimentResult& result);

/// Drivers. Streams are derived per (experiment, cell, iteration), so
/// results are identical for any thread count and stable under grid
/// edits. threads <= 1 runs inline.
ExperimentResult run_rank(const RankConfig& config, int threads = 1);
ExperimentResult run_shd(const ShdConfig& config, int threads = 1);

}  // namespace gnet
