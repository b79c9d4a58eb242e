#include "gnet/regress.hpp"

#include <string>
#include <vector>

#include "gnet/errors.hpp"

namespace gnet {

LocalFit fit_local(const DataMatrix& data, NodeId node, ParentSet parents) {
  const int m = data.m();
  const long n = data.n();
  if (node < 0 || node >= m) throw InvalidArgument("node out of range");
  if (parents.contains(node)) throw InvalidArgument("a node cannot be its own parent");
  if (m < 64 && (parents.mask >> m) != 0) {
    throw DimensionMismatch("parent set references a node out of range");
  }
  const int k = parents.k();
  if (n <= k) {
    throw InsufficientSamples("need n > k; n=" + std::to_string(n) + " k=" + std::to_string(k));
  }

  const std::vector<NodeId> members = parents.members();
  const Eigen::MatrixXd& full = data.augmented_gram();
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(k));
  idx.push_back(0);
  for (NodeId j : members) idx.push_back(j + 1);

  Eigen::MatrixXd sigma(k, k);
  Eigen::VectorXd moment(k);
  for (int a = 0; a < k; ++a) {
    moment(a) = full(idx[static_cast<std::size_t>(a)], node + 1);
    for (int b = 0; b < k; ++b) {
      sigma(a, b) = full(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spectrum(sigma, Eigen::EigenvaluesOnly);
  const double lmin = spectrum.eigenvalues()(0);
  const double lmax = spectrum.eigenvalues()(k - 1);
  if (!(lmax > 0.0) || lmin <= 0.0 || lmin < kSingularRcond * lmax) {
    throw SingularDesign("design Gram for node " + std::to_string(node) +
                         " is singular to working precision");
  }
  Eigen::LLT<Eigen::MatrixXd> chol(sigma);
  if (chol.info() != Eigen::Success) {
    throw SingularDesign("Cholesky failed on design Gram for node " + std::to_string(node));
  }
  Eigen::VectorXd beta = chol.solve(moment);

  // tau_hat comes from a literal residual pass rather than Gram algebra,
  // so perfect fits land at exactly the cancellation floor of the data.
  double rss = 0.0;
  for (long r = 0; r < n; ++r) {
    double pred = beta(0);
    for (std::size_t t = 0; t < members.size(); ++t) {
      pred += beta(static_cast<int>(t) + 1) * data(r, members[t]);
    }
    const double resid = data(r, node) - pred;
    rss += resid * resid;
  }
  const double tau = rss / static_cast<double>(n);
  const double rhat = beta.dot(sigma * beta);

  LocalFit fit;
  fit.node = node;
  fit.parents = parents;
  fit.n = n;
  fit.k = k;
  fit.beta_hat = std::move(beta);
  fit.tau_hat = tau;
  fit.r_hat = rhat;
  fit.gram = std::move(sigma);
  return fit;
}

}  // namespace gnet
