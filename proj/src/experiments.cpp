#include "gnet/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

#include "gnet/errors.hpp"
#include "gnet/fmtutil.hpp"
#include "gnet/rng.hpp"
#include "gnet/search.hpp"
#include "gnet/sim.hpp"

namespace gnet {

namespace {

constexpr std::uint64_t kRankExperimentId = 1;
constexpr std::uint64_t kShdExperimentId = 2;

std::uint64_t bits_of(double x) { return std::bit_cast<std::uint64_t>(x); }

/// Runs fn(0..jobs-1), each job exactly once, order unspecified beyond
/// determinism of the per-job work itself.
void run_jobs(int jobs, int threads, const std::function<void(int)>& fn) {
  threads = std::min(std::max(threads, 1), std::max(jobs, 1));
  if (threads <= 1) {
    for (int j = 0; j < jobs; ++j) fn(j);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const int j = next.fetch_add(1);
        if (j >= jobs) break;
        fn(j);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

void warn_failure(const char* experiment, std::uint64_t seed, int iteration, long n,
                  const char* what) {
  std::fprintf(stderr, "warning: %s iteration %d (seed %llu, n %ld) failed: %s\n", experiment,
               iteration, static_cast<unsigned long long>(seed), n, what);
}

struct CellStats {
  std::vector<double> values;
  long failures = 0;
};

}  // namespace

std::vector<SummaryRow> ExperimentResult::summarize() const {
  std::map<std::tuple<int, int, bool, double, long>, CellStats> cells;
  auto key_of = [](const ResultRow& row) {
    return std::make_tuple(static_cast<int>(row.metric), row.m, row.has_nn, row.nn, row.n);
  };
  for (const ResultRow& row : rows) {
    CellStats& cell = cells[key_of(row)];
    if (row.statistic == "failure") {
      ++cell.failures;
    } else {
      cell.values.push_back(row.value);
    }
  }
  std::vector<SummaryRow> out;
  out.reserve(cells.size());
  for (const auto& [key, cell] : cells) {
    SummaryRow s;
    s.metric = static_cast<MetricId>(std::get<0>(key));
    s.m = std::get<1>(key);
    s.has_nn = std::get<2>(key);
    s.nn = std::get<3>(key);
    s.n = std::get<4>(key);
    s.count = static_cast<long>(cell.values.size());
    s.failures = cell.failures;
    if (s.count > 0) {
      double sum = 0.0;
      for (double v : cell.values) sum += v;
      s.mean = sum / static_cast<double>(s.count);
      if (s.count > 1) {
        double ss = 0.0;
        for (double v : cell.values) ss += (v - s.mean) * (v - s.mean);
        s.stderr_mean = std::sqrt(ss / static_cast<double>(s.count - 1) /
                                  static_cast<double>(s.count));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

void ExperimentResult::write_rows_csv(std::ostream& out) const {
  out << "metric,m,nn,n,iteration,statistic,value\n";
  for (const ResultRow& row : rows) {
    out << metric_name(row.metric) << ',' << row.m << ',';
    if (row.has_nn) out << g17(row.nn);
    out << ',' << row.n << ',' << row.iteration << ',' << row.statistic << ',' << g17(row.value)
        << '\n';
  }
}

void ExperimentResult::write_summary_csv(std::ostream& out) const {
  out << "metric,m,nn,n,mean,stderr,failures\n";
  for (const SummaryRow& s : summarize()) {
    out << metric_name(s.metric) << ',' << s.m << ',';
    if (s.has_nn) out << g17(s.nn);
    out << ',' << s.n << ',' << g17(s.mean) << ',' << g17(s.stderr_mean) << ',' << s.failures
        << '\n';
  }
  for (const ShdGapRow& gap : shd_gaps(*this)) {
    out << gap.comparison << ",,," << gap.n << ',' << g17(gap.mean_gap) << ','
        << g17(gap.stderr_mean) << ',' << gap.incomplete << '\n';
  }
}

std::vector<ShdGapRow> shd_gaps(const ExperimentResult& result) {
  // Pair SHD values of the metrics of interest per (m, nn, n, iteration).
  struct Paired {
    double rnml = 0.0, mdl3 = 0.0, aic = 0.0, bic = 0.0;
    bool has_rnml = false, has_mdl3 = false, has_aic = false, has_bic = false;
  };
  std::map<std::tuple<int, double, long, int>, Paired> groups;
  for (const ResultRow& row : result.rows) {
    if (row.statistic != "shd") continue;
    Paired& p = groups[std::make_tuple(row.m, row.nn, row.n, row.iteration)];
    switch (row.metric) {
      case MetricId::RnmlExact:
        p.rnml = row.value;
        p.has_rnml = true;
        break;
      case MetricId::Mdl3:
        p.mdl3 = row.value;
        p.has_mdl3 = true;
        break;
      case MetricId::Aic:
        p.aic = row.value;
        p.has_aic = true;
        break;
      case MetricId::Bic:
        p.bic = row.value;
        p.has_bic = true;
        break;
      default:
        break;
    }
  }
  std::map<long, std::pair<CellStats, CellStats>> by_n;  // first: vs mdl3, second: vs best
  std::map<long, std::pair<long, long>> incomplete;
  for (const auto& [key, p] : groups) {
    const long n = std::get<2>(key);
    auto& [vs_mdl3, vs_best] = by_n[n];
    auto& [inc_mdl3, inc_best] = incomplete[n];
    if (p.has_rnml && p.has_mdl3) {
      vs_mdl3.values.push_back(p.mdl3 - p.rnml);
    } else {
      ++inc_mdl3;
    }
    if (p.has_rnml && p.has_aic && p.has_bic) {
      vs_best.values.push_back(std::min(p.aic, p.bic) - p.rnml);
    } else {
      ++inc_best;
    }
  }
  std::vector<ShdGapRow> out;
  auto emit = [&out](const std::string& name, long n, const CellStats& stats, long inc) {
    if (stats.values.empty() && inc == 0) return;
    ShdGapRow g;
    g.comparison = name;
    g.n = n;
    g.pairs = static_cast<long>(stats.values.size());
    g.incomplete = inc;
    if (g.pairs > 0) {
      double sum = 0.0;
      for (double v : stats.values) sum += v;
      g.mean_gap = sum / static_cast<double>(g.pairs);
      if (g.pairs > 1) {
        double ss = 0.0;
        for (double v : stats.values) ss += (v - g.mean_gap) * (v - g.mean_gap);
        g.stderr_mean = std::sqrt(ss / static_cast<double>(g.pairs - 1) /
                                  static_cast<double>(g.pairs));
      }
    }
    out.push_back(std::move(g));
  };
  for (const auto& [n, stats] : by_n) {
    const auto& [inc_mdl3, inc_best] = incomplete[n];
    emit("mdl3_minus_rnml", n, stats.first, inc_mdl3);
    emit("min_aic_bic_minus_rnml", n, stats.second, inc_best);
  }
  return out;
}

ExperimentResult run_rank(const RankConfig& config, int threads) {
  if (config.m < 1 || config.m > 5) {
    throw InvalidArgument("rank experiment needs 1 <= m <= 5");
  }
  if (config.iterations < 1) throw InvalidArgument("need iterations >= 1");
  if (config.sample_sizes.empty()) throw InvalidArgument("need at least one sample size");
  if (config.metrics.empty()) throw InvalidArgument("need at least one metric");

  const int m = config.m;
  std::vector<std::vector<ResultRow>> slots(static_cast<std::size_t>(config.iterations));
  run_jobs(config.iterations, threads, [&](int it) {
    std::vector<ResultRow>& sink = slots[static_cast<std::size_t>(it)];
    const std::uint64_t structure_seed =
        derive_seed(config.seed, {kRankExperimentId, static_cast<std::uint64_t>(m),
                                  static_cast<std::uint64_t>(it)});
    Rng structure_rng(structure_seed);
    const Dag truth = sample_uniform_dag(m, structure_rng);
    const GaussianParams params = sample_params(truth, structure_rng);
    for (long n : config.sample_sizes) {
      auto emit = [&](const char* statistic, MetricId metric, double value) {
        ResultRow row;
        row.metric = metric;
        row.m = m;
        row.n = n;
        row.iteration = it;
        row.statistic = statistic;
        row.value = value;
        sink.push_back(std::move(row));
      };
      try {
        Rng data_rng(derive_seed(config.seed,
                                 {kRankExperimentId, static_cast<std::uint64_t>(m),
                                  static_cast<std::uint64_t>(it), static_cast<std::uint64_t>(n)}));
        const DataMatrix data = sample_data(truth, params, n, data_rng);
        const std::vector<LocalScoreTable> tables = build_tables(config.metrics, data, m - 1);
        for (std::size_t t = 0; t < tables.size(); ++t) {
          emit("rank", config.metrics[t],
               static_cast<double>(rank_of(truth, tables[t])));
        }
      } catch (const Error& e) {
        warn_failure("rank", config.seed, it, n, e.what());
        for (MetricId metric : config.metrics) emit("failure", metric, 1.0);
      }
    }
  });

  ExperimentResult result;
  for (auto& slot : slots) {
    for (ResultRow& row : slot) result.rows.push_back(std::move(row));
  }
  return result;
}

ExperimentResult run_shd(const ShdConfig& config, int threads) {
  if (config.node_counts.empty() || config.neighbor_counts.empty() ||
      config.sample_sizes.empty() || config.metrics.empty()) {
    throw InvalidArgument("every experiment grid list must be non-empty");
  }
  if (config.iterations < 1) throw InvalidArgument("need iterations >= 1");
  struct Cell {
    int m;
    double nn;
    long n;
  };
  std::vector<Cell> cells;
  for (int m : config.node_counts) {
    if (m < 2) throw InvalidArgument("SHD experiment needs m >= 2");
    for (double nn : config.neighbor_counts) {
      if (!(nn > 0.0) || nn > static_cast<double>(m - 1)) {
        throw InvalidSparsity("expected neighbor count must lie in (0, m-1]");
      }
      for (long n : config.sample_sizes) cells.push_back({m, nn, n});
    }
  }

  const int jobs = static_cast<int>(cells.size()) * config.iterations;
  std::vector<std::vector<ResultRow>> slots(static_cast<std::size_t>(jobs));
  run_jobs(jobs, threads, [&](int job) {
    const Cell& cell = cells[static_cast<std::size_t>(job) /
                             static_cast<std::size_t>(config.iterations)];
    const int it = job % config.iterations;
    std::vector<ResultRow>& sink = slots[static_cast<std::size_t>(job)];
    auto emit = [&](const char* statistic, MetricId metric, double value) {
      ResultRow row;
      row.metric = metric;
      row.m = cell.m;
      row.has_nn = true;
      row.nn = cell.nn;
      row.n = cell.n;
      row.iteration = it;
      row.statistic = statistic;
      row.value = value;
      sink.push_back(std::move(row));
    };
    try {
      Rng rng(derive_seed(config.seed,
                          {kShdExperimentId, static_cast<std::uint64_t>(cell.m), bits_of(cell.nn),
                           static_cast<std::uint64_t>(cell.n), static_cast<std::uint64_t>(it)}));
      const Dag truth = sample_sparse_dag(cell.m, cell.nn, rng);
      const GaussianParams params = sample_params(truth, rng);
      const DataMatrix data = sample_data(truth, params, cell.n, rng);
      int max_in_degree = 0;
      for (const ParentSet& p : truth.parents) max_in_degree = std::max(max_in_degree, p.size());
      const int max_parents = std::max(1, max_in_degree);
      const std::vector<LocalScoreTable> tables =
          build_tables(config.metrics, data, max_parents);
      for (std::size_t t = 0; t < tables.size(); ++t) {
        const SearchResult found = learn_dp(tables[t]);
        emit("shd", config.metrics[t], static_cast<double>(shd(found.best, truth)));
      }
    } catch (const Error& e) {
      warn_failure("shd", config.seed, it, cell.n, e.what());
      for (MetricId metric : config.metrics) emit("failure", metric, 1.0);
    }
  });

  ExperimentResult result;
  for (auto& slot : slots) {
    for (ResultRow& row : slot) result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace gnet
