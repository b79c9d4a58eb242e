#pragma once

#include <Eigen/Dense>

#include "gnet/data.hpp"
#include "gnet/graph.hpp"

namespace gnet {

/// Maximum-likelihood local linear-Gaussian fit of one node on its
/// parents plus an implicit intercept. Coefficient order: intercept
/// first, then parents ascending by node id.
struct LocalFit {
  NodeId node = 0;
  ParentSet parents;
  long n = 0;
  int k = 0;  // regressor count including the intercept
  Eigen::VectorXd beta_hat;
  double tau_hat = 0.0;  // (1/n) * residual sum of squares, divisor n
  double r_hat = 0.0;    // beta' Sigma beta, the fitted second moment
  Eigen::MatrixXd gram;  // k x k scaled Gram Sigma of [1 | parents]
};

/// Reciprocal-condition threshold below which the Gram is treated as
/// singular.
inline constexpr double kSingularRcond = 1e-12;

/// Solves the normal equations off data.augmented_gram(), then takes one
/// residual pass for tau_hat. Throws InsufficientSamples unless n > k,
/// SingularDesign when the Gram fails the conditioning screen.
LocalFit fit_local(const DataMatrix& data, NodeId node, ParentSet parents);

}  // namespace gnet
