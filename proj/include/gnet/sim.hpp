#pragma once

#include <utility>
#include <vector>

#include "gnet/data.hpp"
#include "gnet/graph.hpp"
#include "gnet/rng.hpp"

namespace gnet {

/// Parameters of a linear-Gaussian network: node i is generated as
///   x_i = mu_i + sum_j b_ij (x_j - mu_j) + noise_i.
/// coef[i] holds (parent j, b_ij) sorted by j and must mirror the
/// graph's edges exactly.
struct GaussianParams {
  std::vector<double> mu;
  std::vector<double> tau;
  std::vector<std::vector<std::pair<NodeId, double>>> coef;

  int m() const { return static_cast<int>(mu.size()); }
};

/// What tau means for the noise term.
enum class NoiseConvention {
  VarianceTau,   // noise ~ N(0, tau): tau is the variance
  PrecisionTau,  // noise ~ N(0, 1/tau): tau is the precision
};

/// Whether sampled coefficients keep their positive draw or get a
/// random sign.
enum class CoefSign { Positive, Random };

/// Exactly uniform over all labelled DAGs, by indexing into the cached
/// enumeration. m <= 5.
Dag sample_uniform_dag(int m, Rng& rng);

/// Random topological order, then each order-respecting edge kept with
/// probability nn/(m-1), giving expected neighbor count nn per node.
/// Requires 0 < nn <= m-1.
Dag sample_sparse_dag(int m, double nn, Rng& rng);

/// All of mu_i, tau_i, b_ij drawn i.i.d. uniform on [0.1, 1]. Draw
/// order: nodes ascending; per node mu, tau, then coefficients by
/// ascending parent id.
GaussianParams sample_params(const Dag& dag, Rng& rng, CoefSign sign = CoefSign::Positive);

/// Throws DimensionMismatch unless params mirrors dag exactly.
void check_params_match(const Dag& dag, const GaussianParams& params);

/// Ancestral sampling in the canonical topological order, row by row.
DataMatrix sample_data(const Dag& dag, const GaussianParams& params, long n, Rng& rng,
                       NoiseConvention noise = NoiseConvention::VarianceTau);

}  // namespace gnet
