#include "gnet/sim.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "gnet/errors.hpp"

namespace gnet {

Dag sample_uniform_dag(int m, Rng& rng) {
  if (m < 1) throw InvalidArgument("need m >= 1");
  const std::vector<Dag>& all = enumerate_dags_cached(m);  // throws TooLarge for m > 5
  return all[static_cast<std::size_t>(rng.below(all.size()))];
}

Dag sample_sparse_dag(int m, double nn, Rng& rng) {
  if (m < 2) throw InvalidArgument("need m >= 2");
  if (!(nn > 0.0) || nn > static_cast<double>(m - 1)) {
    throw InvalidSparsity("expected neighbor count must lie in (0, m-1]");
  }
  std::vector<NodeId> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  const double p = nn / static_cast<double>(m - 1);
  Dag dag(m);
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      if (rng.uniform01() < p) {
        dag.add_edge(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]);
      }
    }
  }
  return dag;
}

GaussianParams sample_params(const Dag& dag, Rng& rng, CoefSign sign) {
  validate_acyclic(dag);
  GaussianParams params;
  params.mu.resize(static_cast<std::size_t>(dag.m));
  params.tau.resize(static_cast<std::size_t>(dag.m));
  params.coef.resize(static_cast<std::size_t>(dag.m));
  for (NodeId v = 0; v < dag.m; ++v) {
    params.mu[static_cast<std::size_t>(v)] = rng.uniform(0.1, 1.0);
    params.tau[static_cast<std::size_t>(v)] = rng.uniform(0.1, 1.0);
    for (NodeId j : dag.parents[static_cast<std::size_t>(v)].members()) {
      double b = rng.uniform(0.1, 1.0);
      if (sign == CoefSign::Random && rng.below(2) == 1) b = -b;
      params.coef[static_cast<std::size_t>(v)].emplace_back(j, b);
    }
  }
  return params;
}

void check_params_match(const Dag& dag, const GaussianParams& params) {
  if (params.m() != dag.m || static_cast<int>(params.tau.size()) != dag.m ||
      static_cast<int>(params.coef.size()) != dag.m) {
    throw DimensionMismatch("parameter vectors disagree with the graph's node count");
  }
  for (NodeId v = 0; v < dag.m; ++v) {
    const auto& row = params.coef[static_cast<std::size_t>(v)];
    const std::vector<NodeId> expect = dag.parents[static_cast<std::size_t>(v)].members();
    if (row.size() != expect.size()) {
      throw DimensionMismatch("coefficients of node " + std::to_string(v) +
                              " do not match its parent set");
    }
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (row[t].first != expect[t]) {
        throw DimensionMismatch("coefficients of node " + std::to_string(v) +
                                " do not match its parent set");
      }
    }
    if (!(params.tau[static_cast<std::size_t>(v)] > 0.0)) {
      throw InvalidArgument("tau must be positive at node " + std::to_string(v));
    }
  }
}

DataMatrix sample_data(const Dag& dag, const GaussianParams& params, long n, Rng& rng,
                       NoiseConvention noise) {
  const std::vector<NodeId> order = validate_acyclic(dag);
  check_params_match(dag, params);
  if (n < 1) throw InvalidArgument("need n >= 1");
  const int m = dag.m;
  if (m < 1) throw InvalidArgument("need m >= 1");
  std::vector<double> stddev(static_cast<std::size_t>(m));
  for (NodeId v = 0; v < m; ++v) {
    const double tau = params.tau[static_cast<std::size_t>(v)];
    stddev[static_cast<std::size_t>(v)] =
        noise == NoiseConvention::VarianceTau ? std::sqrt(tau) : std::sqrt(1.0 / tau);
  }
  Eigen::MatrixXd values(n, m);
  for (long r = 0; r < n; ++r) {
    for (NodeId v : order) {
      double x = params.mu[static_cast<std::size_t>(v)];
      for (const auto& [j, b] : params.coef[static_cast<std::size_t>(v)]) {
        x += b * (values(r, j) - params.mu[static_cast<std::size_t>(j)]);
      }
      x += rng.normal(0.0, stddev[static_cast<std::size_t>(v)]);
      values(r, v) = x;
    }
  }
  return DataMatrix(std::move(values));
}

}  // namespace gnet
