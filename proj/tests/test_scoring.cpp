#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gnet/errors.hpp"
#include "gnet/graph.hpp"
#include "gnet/rng.hpp"
#include "gnet/scoring.hpp"
#include "gnet/sim.hpp"
#include "support/oracles.hpp"

using namespace gnet;

namespace {

// Minimal fit carrier for exercising the closed-form metrics directly.
LocalFit made_fit(long n, int k, double tau, double r) {
  LocalFit fit;
  fit.node = 0;
  fit.n = n;
  fit.k = k;
  for (int j = 1; j < k; ++j) fit.parents.add(j);
  fit.tau_hat = tau;
  fit.r_hat = r;
  return fit;
}

DataMatrix random_matrix(int m, long n, Rng& rng) {
  Eigen::MatrixXd values(n, m);
  for (long r = 0; r < n; ++r) {
    for (int c = 0; c < m; ++c) values(r, c) = rng.normal(0.0, 1.0) + 0.2 * c;
  }
  return DataMatrix(std::move(values));
}

// The fixed benchmark network 0->2<-1, 2->3: a singleton equivalence
// class, so one structure should win once n is large enough.
Dag benchmark_dag() {
  Dag dag(4);
  dag.add_edge(0, 2);
  dag.add_edge(1, 2);
  dag.add_edge(2, 3);
  return dag;
}

GaussianParams benchmark_params() {
  GaussianParams params;
  params.mu = {0.5, 0.2, 0.9, 0.4};
  params.tau = {0.5, 0.5, 0.4, 0.3};
  params.coef = {{}, {}, {{0, 0.8}, {1, 0.7}}, {{2, 0.9}}};
  return params;
}

}  // namespace

TEST_CASE("metric names round trip and reject junk") {
  CHECK(metric_name(MetricId::RnmlExact) == "rnml");
  CHECK(metric_name(MetricId::RnmlStirling) == "rnml-stirling");
  CHECK(metric_name(MetricId::Mdl3) == "mdl3");
  CHECK(metric_name(MetricId::Bic) == "bic");
  CHECK(metric_name(MetricId::Aic) == "aic");
  for (MetricId metric : kAllMetrics) CHECK(parse_metric(metric_name(metric)) == metric);
  CHECK_THROWS_AS(parse_metric("bdeu"), InvalidArgument);
  CHECK_THROWS_AS(parse_metric(""), InvalidArgument);
}

TEST_CASE("worked examples pin the five closed forms") {
  const double tau0 = 1.0 / (2.0 * std::numbers::pi * std::numbers::e);
  const LocalFit flat = made_fit(100, 2, tau0, 0.7);
  // tau = 1/(2 pi e) cancels the fit term, leaving the penalty alone.
  CHECK(local_score(MetricId::Bic, flat, 5) == doctest::Approx(std::log(100.0)).epsilon(1e-12));
  CHECK(local_score(MetricId::Mdl3, flat, 5) ==
        doctest::Approx(std::log(100.0) + 2.0 * std::log(5.0)).epsilon(1e-12));
  CHECK(local_score(MetricId::Aic, flat, 5) == doctest::Approx(2.0).epsilon(1e-12));

  const LocalFit unit = made_fit(4, 1, 1.0, 1.0);
  CHECK(local_score(MetricId::RnmlExact, unit, 1) ==
        doctest::Approx(std::log(2.0 / std::numbers::pi)).epsilon(1e-12));
  CHECK(local_score(MetricId::RnmlStirling, unit, 1) ==
        doctest::Approx(-2.0 * std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("all five metrics match the long double reference over random tuples") {
  Rng rng(derive_seed(0x5C03E, {1}));
  for (int trial = 0; trial < 1000; ++trial) {
    const long n = 5 + static_cast<long>(rng.below(19996));
    const int k_cap = static_cast<int>(std::min<long>(n - 1, 12));
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k_cap)));
    const double tau = std::exp(rng.uniform(std::log(1e-6), std::log(1e3)));
    const double r = std::exp(rng.uniform(std::log(1e-6), std::log(1e3)));
    const int m = k + static_cast<int>(rng.below(9));
    const LocalFit fit = made_fit(n, k, tau, r);
    for (MetricId metric : kAllMetrics) {
      const double got = local_score(metric, fit, m);
      const long double want = oracles::score_reference(
          metric, static_cast<long double>(n), static_cast<long double>(k), tau, r, m);
      const double scale = std::max(1.0, std::fabs(static_cast<double>(want)));
      CHECK(std::fabs(got - static_cast<double>(want)) / scale < 1e-9);
    }
  }
}

TEST_CASE("mdl3 minus bic is exactly the pointer term") {
  Rng rng(derive_seed(0x5C03E, {2}));
  for (int trial = 0; trial < 25; ++trial) {
    const Dag dag = sample_uniform_dag(4, rng);
    const GaussianParams params = sample_params(dag, rng);
    const DataMatrix data = sample_data(dag, params, 80, rng);
    const double mdl3 = total_score(MetricId::Mdl3, data, dag);
    const double bic = total_score(MetricId::Bic, data, dag);
    const double expected = std::log(4.0) * static_cast<double>(dag.edge_count() + dag.m);
    const double scale = std::max(1.0, std::fabs(expected));
    CHECK(std::fabs((mdl3 - bic) - expected) / scale < 1e-9);
  }
}

TEST_CASE("total score decomposes into local scores") {
  Rng rng(derive_seed(0x5C03E, {3}));
  const DataMatrix data = random_matrix(4, 60, rng);
  Dag dag(4);
  dag.add_edge(0, 1);
  dag.add_edge(0, 2);
  dag.add_edge(1, 3);
  dag.add_edge(2, 3);
  for (MetricId metric : kAllMetrics) {
    double by_hand = 0.0;
    for (NodeId v = 0; v < 4; ++v) {
      by_hand += local_score(metric, fit_local(data, v, dag.parents[static_cast<std::size_t>(v)]), 4);
    }
    CHECK(total_score(metric, data, dag) == by_hand);
  }
}

TEST_CASE("total score rejects mismatched or cyclic input") {
  Rng rng(derive_seed(0x5C03E, {4}));
  const DataMatrix data = random_matrix(3, 30, rng);
  CHECK_THROWS_AS(total_score(MetricId::Bic, data, Dag(4)), DimensionMismatch);
  Dag cyclic(3);
  cyclic.parents[0].add(1);
  cyclic.parents[1].add(0);
  CHECK_THROWS_AS(total_score(MetricId::Bic, data, cyclic), CycleError);
}

TEST_CASE("scores are invariant under row permutation") {
  Rng rng(derive_seed(0x5C03E, {5}));
  const DataMatrix data = random_matrix(3, 200, rng);
  const DataMatrix reversed{data.values().colwise().reverse().eval()};
  Dag dag(3);
  dag.add_edge(0, 1);
  dag.add_edge(1, 2);
  for (MetricId metric : kAllMetrics) {
    CHECK(total_score(metric, data, dag) ==
          doctest::Approx(total_score(metric, reversed, dag)).epsilon(1e-12));
  }
}

TEST_CASE("contract violations throw the advertised errors") {
  const LocalFit fit = made_fit(10, 2, 0.5, 0.5);
  CHECK_THROWS_AS(local_score(MetricId::Bic, fit, 0), InvalidArgument);
  CHECK_THROWS_AS(local_score(MetricId::Bic, made_fit(2, 2, 0.5, 0.5), 3), InsufficientSamples);
  CHECK_THROWS_AS(local_score(MetricId::Bic, made_fit(2, 3, 0.5, 0.5), 3), InsufficientSamples);
}

TEST_CASE("degenerate tau is floored, counted, or fatal by option") {
  const LocalFit collapsed = made_fit(50, 2, 0.0, 0.4);
  ScoreOptions options;
  ScoreDiagnostics diag;
  const double floored = local_score(MetricId::Bic, collapsed, 3, options, &diag);
  CHECK(diag.tau_substitutions == 1);
  CHECK(diag.r_substitutions == 0);
  const LocalFit at_floor = made_fit(50, 2, options.tau_floor, 0.4);
  CHECK(floored == local_score(MetricId::Bic, at_floor, 3));

  options.strict_degenerate = true;
  CHECK_THROWS_AS(local_score(MetricId::Bic, collapsed, 3, options), DegenerateFit);
}

TEST_CASE("zero fitted moment only matters to the refined metrics") {
  const LocalFit centered = made_fit(50, 1, 0.9, 0.0);
  ScoreDiagnostics diag;
  local_score(MetricId::Bic, centered, 3, {}, &diag);
  local_score(MetricId::Aic, centered, 3, {}, &diag);
  local_score(MetricId::Mdl3, centered, 3, {}, &diag);
  CHECK(diag.r_substitutions == 0);
  local_score(MetricId::RnmlExact, centered, 3, {}, &diag);
  CHECK(diag.r_substitutions == 1);
  local_score(MetricId::RnmlStirling, centered, 3, {}, &diag);
  CHECK(diag.r_substitutions == 2);
  ScoreOptions strict;
  strict.strict_degenerate = true;
  CHECK_THROWS_AS(local_score(MetricId::RnmlExact, centered, 3, strict), DegenerateFit);
  CHECK_NOTHROW(local_score(MetricId::Bic, centered, 3, strict));
}

TEST_CASE("dropping the intercept from k shifts penalties only") {
  const double tau0 = 1.0 / (2.0 * std::numbers::pi * std::numbers::e);
  const LocalFit fit = made_fit(100, 3, tau0, 0.8);
  ScoreOptions no_intercept;
  no_intercept.intercept_in_k = false;
  CHECK(local_score(MetricId::Bic, fit, 4) - local_score(MetricId::Bic, fit, 4, no_intercept) ==
        doctest::Approx(0.5 * std::log(100.0)).epsilon(1e-12));
  CHECK(local_score(MetricId::Mdl3, fit, 4) - local_score(MetricId::Mdl3, fit, 4, no_intercept) ==
        doctest::Approx(0.5 * std::log(100.0) + std::log(4.0)).epsilon(1e-12));
  CHECK(local_score(MetricId::Aic, fit, 4) - local_score(MetricId::Aic, fit, 4, no_intercept) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // The refined metrics just see the smaller k.
  const double got = local_score(MetricId::RnmlExact, fit, 4, no_intercept);
  const long double want =
      oracles::score_reference(MetricId::RnmlExact, 100.0L, 2.0L, tau0, 0.8L, 4.0L);
  CHECK(got == doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
  // An intercept-only fit has no regressors left for the refined code.
  const LocalFit bare = made_fit(50, 1, 0.5, 0.3);
  CHECK_THROWS_AS(local_score(MetricId::RnmlExact, bare, 4, no_intercept), DegenerateFit);
  CHECK_NOTHROW(local_score(MetricId::Bic, bare, 4, no_intercept));
}

TEST_CASE("score tables validate their inputs") {
  CHECK_THROWS_AS(LocalScoreTable(MetricId::Bic, 0, 0), InvalidArgument);
  CHECK_THROWS_AS(LocalScoreTable(MetricId::Bic, 65, 1), TooLarge);
  CHECK_THROWS_AS(LocalScoreTable(MetricId::Bic, 3, -1), InvalidArgument);
  CHECK_THROWS_AS(LocalScoreTable(MetricId::Bic, 3, 3), InvalidArgument);
  LocalScoreTable table(MetricId::Bic, 3, 1);
  CHECK_THROWS_AS(table.insert(3, 0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(table.insert(0, 0b001, 1.0), InvalidArgument);  // self parent
  CHECK_THROWS_AS(table.insert(0, 0b1000, 1.0), InvalidArgument);
  CHECK_THROWS_AS(table.insert(0, 0b110, 1.0), InvalidArgument);  // beyond max_parents
  table.insert(0, 0b010, 1.5);
  CHECK(table.contains(0, 0b010));
  CHECK(!table.contains(0, 0b100));
  CHECK(!table.contains(7, 0));
  CHECK(table.at(0, 0b010) == 1.5);
  CHECK_THROWS_AS(table.at(0, 0b100), InvalidArgument);
  CHECK_THROWS_AS(table.at(5, 0), InvalidArgument);
  table.insert(0, 0b010, 2.5);  // overwrite, not duplicate
  CHECK(table.at(0, 0b010) == 2.5);
  CHECK(table.size() == 1);
}

TEST_CASE("build_table covers every parent set up to the cap") {
  Rng rng(derive_seed(0x5C03E, {6}));
  const DataMatrix small = random_matrix(3, 40, rng);
  const LocalScoreTable full = build_table(MetricId::Bic, small, 2);
  CHECK(full.size() == 12);  // 3 nodes x (1 + 2 + 1) subsets
  const DataMatrix wide = random_matrix(10, 12, rng);
  const LocalScoreTable capped = build_table(MetricId::Aic, wide, 4);
  CHECK(capped.size() == 2560);  // 10 nodes x sum_{s<=4} C(9,s)
  for (NodeId v = 0; v < 10; ++v) {
    for (const auto& [mask, unused] : capped.row(v)) {
      CHECK(std::popcount(mask) <= 4);
      CHECK(((mask >> v) & 1u) == 0u);
    }
  }
}

TEST_CASE("table entries equal direct local scores bitwise") {
  Rng rng(derive_seed(0x5C03E, {7}));
  const DataMatrix data = random_matrix(4, 50, rng);
  for (MetricId metric : kAllMetrics) {
    const LocalScoreTable table = build_table(metric, data, 3);
    for (NodeId v = 0; v < 4; ++v) {
      for (const auto& [mask, score] : table.row(v)) {
        CHECK(score == local_score(metric, fit_local(data, v, ParentSet{mask}), 4));
      }
    }
  }
}

TEST_CASE("multi-metric build equals per-metric builds bitwise") {
  Rng rng(derive_seed(0x5C03E, {8}));
  const DataMatrix data = random_matrix(4, 50, rng);
  const std::vector<MetricId> metrics(kAllMetrics.begin(), kAllMetrics.end());
  const std::vector<LocalScoreTable> joint = build_tables(metrics, data, 3);
  for (std::size_t t = 0; t < metrics.size(); ++t) {
    const LocalScoreTable solo = build_table(metrics[t], data, 3);
    CHECK(joint[t].size() == solo.size());
    for (NodeId v = 0; v < 4; ++v) {
      for (const auto& [mask, score] : solo.row(v)) {
        CHECK(joint[t].at(v, mask) == score);
      }
    }
    CHECK(joint[t].degenerate_substitutions == solo.degenerate_substitutions);
  }
}

TEST_CASE("table totals agree with total_score bitwise") {
  Rng rng(derive_seed(0x5C03E, {9}));
  const DataMatrix data = random_matrix(4, 60, rng);
  const LocalScoreTable table = build_table(MetricId::RnmlExact, data, 3);
  for (const Dag& dag : enumerate_dags_cached(4)) {
    CHECK(table_total(table, dag) == total_score(MetricId::RnmlExact, data, dag));
  }
  CHECK_THROWS_AS(table_total(table, Dag(5)), DimensionMismatch);
}

TEST_CASE("build_tables rejects bad requests") {
  Rng rng(derive_seed(0x5C03E, {10}));
  const DataMatrix data = random_matrix(3, 10, rng);
  CHECK_THROWS_AS(build_tables({}, data, 1), InvalidArgument);
  CHECK_THROWS_AS(build_table(MetricId::Bic, data, 3), InvalidArgument);
  CHECK_THROWS_AS(build_table(MetricId::Bic, data, -1), InvalidArgument);
  const DataMatrix tiny = random_matrix(3, 3, rng);
  CHECK_THROWS_AS(build_table(MetricId::Bic, tiny, 2), InsufficientSamples);
}

TEST_CASE("an exact linear dependence is counted as a substitution") {
  Rng rng(derive_seed(0x5C03E, {11}));
  Eigen::MatrixXd values(40, 2);
  for (long r = 0; r < 40; ++r) {
    values(r, 0) = rng.normal(0.0, 1.0);
    values(r, 1) = 2.0 * values(r, 0);
  }
  const DataMatrix data{std::move(values)};
  const LocalScoreTable table = build_table(MetricId::Bic, data, 1);
  // Each node fits the other perfectly, so both parented masks collapse.
  CHECK(table.degenerate_substitutions == 2);
  ScoreOptions strict;
  strict.strict_degenerate = true;
  CHECK_THROWS_AS(build_table(MetricId::Bic, data, 1, strict), DegenerateFit);
}

TEST_CASE("table export is sorted, headed, and parseable") {
  Rng rng(derive_seed(0x5C03E, {12}));
  const DataMatrix data = random_matrix(3, 30, rng);
  const LocalScoreTable table = build_table(MetricId::Mdl3, data, 2);
  std::ostringstream out;
  write_table_csv(table, out);
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "node,parent_mask,k,score_nats");
  int rows = 0;
  long last_key = -1;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string node_s, mask_s, k_s, score_s;
    REQUIRE(std::getline(fields, node_s, ','));
    REQUIRE(std::getline(fields, mask_s, ','));
    REQUIRE(std::getline(fields, k_s, ','));
    REQUIRE(std::getline(fields, score_s, ','));
    const NodeId node = std::stoi(node_s);
    const std::uint64_t mask = std::stoull(mask_s);
    CHECK(std::stoi(k_s) == std::popcount(mask) + 1);
    CHECK(std::stod(score_s) == table.at(node, mask));
    const long key = node * 16 + static_cast<long>(mask);
    CHECK(key > last_key);
    last_key = key;
    ++rows;
  }
  CHECK(rows == 12);
}

TEST_CASE("the refined metric recovers the benchmark network as n grows") {
  const Dag truth = benchmark_dag();
  const GaussianParams params = benchmark_params();
  const std::vector<Dag>& all = enumerate_dags_cached(4);
  const std::vector<long> sizes = {50, 2000};
  std::vector<double> fraction;
  for (long n : sizes) {
    int hits = 0;
    const int seeds = 30;
    for (int it = 0; it < seeds; ++it) {
      Rng rng(derive_seed(0x5C03E,
                          {13, static_cast<std::uint64_t>(it), static_cast<std::uint64_t>(n)}));
      const DataMatrix data = sample_data(truth, params, n, rng);
      const LocalScoreTable table = build_table(MetricId::RnmlExact, data, 3);
      const double truth_score = table_total(table, truth);
      bool unique_best = true;
      for (const Dag& other : all) {
        if (other.parents == truth.parents) continue;
        if (table_total(table, other) <= truth_score) {
          unique_best = false;
          break;
        }
      }
      if (unique_best) ++hits;
    }
    fraction.push_back(static_cast<double>(hits) / seeds);
  }
  MESSAGE("unique-recovery fraction: n=50 " << fraction[0] << ", n=2000 " << fraction[1]);
  CHECK(fraction[1] >= fraction[0]);
  CHECK(fraction[1] >= 0.7);
}

TEST_CASE("the exact and approximate refined codes usually pick the same structure") {
  // The two closed forms sit on very different absolute scales, so the
  // only meaningful comparison is which structure each one prefers.
  int agreements = 0;
  int trials = 0;
  for (int it = 0; it < 60; ++it) {
    Rng rng(derive_seed(0x5C03E, {14, static_cast<std::uint64_t>(it)}));
    const Dag truth = sample_uniform_dag(3, rng);
    const GaussianParams params = sample_params(truth, rng);
    const DataMatrix data = sample_data(truth, params, 200, rng);
    const std::vector<LocalScoreTable> tables =
        build_tables({MetricId::RnmlExact, MetricId::RnmlStirling}, data, 2);
    const Dag* best_exact = nullptr;
    const Dag* best_stirling = nullptr;
    double score_exact = 0.0;
    double score_stirling = 0.0;
    for (const Dag& dag : enumerate_dags_cached(3)) {
      const double se = table_total(tables[0], dag);
      const double ss = table_total(tables[1], dag);
      if (best_exact == nullptr || se < score_exact) {
        best_exact = &dag;
        score_exact = se;
      }
      if (best_stirling == nullptr || ss < score_stirling) {
        best_stirling = &dag;
        score_stirling = ss;
      }
    }
    ++trials;
    if (best_exact->parents == best_stirling->parents) ++agreements;
  }
  const double rate = static_cast<double>(agreements) / trials;
  MESSAGE("argmin agreement rate: " << rate);
  // Measured 60/60 on these seeds; the bound leaves room for platform
  // rounding to flip an occasional near-tie.
  CHECK(rate >= 0.9);
}
