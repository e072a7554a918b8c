#include "z2amp/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>

#include "z2amp/error.hpp"

namespace z2amp {

GaussHermiteRule make_gauss_hermite(std::size_t count) {
  if (count == 0) throw Error(ErrorCategory::InvalidArgument, "quadrature needs at least one node");
  const auto m = static_cast<Eigen::Index>(count);

  // Jacobi matrix of He_k: x He_k = He_{k+1} + k He_{k-1}.
  Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd off(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index k = 1; k < m; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diagonal, off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCategory::Internal, "Golub-Welsch eigen-solve failed");

  GaussHermiteRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  for (Eigen::Index k = 0; k < m; ++k) {
    rule.nodes[k] = solver.eigenvalues()(k);
    const double lead = solver.eigenvectors()(0, k);
    rule.weights[k] = lead * lead;
  }

  // The rule is symmetric; enforce it exactly so odd integrands vanish.
  for (std::size_t k = 0; k < count / 2; ++k) {
    const std::size_t mirror = count - 1 - k;
    const double node = 0.5 * (rule.nodes[mirror] - rule.nodes[k]);
    const double weight = 0.5 * (rule.weights[k] + rule.weights[mirror]);
    rule.nodes[k] = -node;
    rule.nodes[mirror] = node;
    rule.weights[k] = rule.weights[mirror] = weight;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;

  const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  for (double& w : rule.weights) w /= total;
  return rule;
}

const GaussHermiteRule& default_gauss_hermite() {
  static const GaussHermiteRule rule = make_gauss_hermite(kDefaultHermiteNodes);
  return rule;
}

}  // namespace z2amp
