#pragma once

#include <cstddef>
#include <vector>

namespace z2amp {

// Gauss-Hermite rule for expectations under the standard normal:
//   E[f(G)] ~= sum_k weights[k] * f(nodes[k]),  G ~ N(0, 1).
// Nodes and weights come from the Golub-Welsch eigenproblem for the
// probabilists' Hermite recurrence, which is the physicists' rule after the
// change of variable x = sqrt(2) u. Weights sum to one.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double expect(F&& f) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * f(nodes[k]);
    return sum;
  }
};

inline constexpr std::size_t kDefaultHermiteNodes = 201;

GaussHermiteRule make_gauss_hermite(std::size_t nodes);

// Shared 201-node rule, built once on first use.
const GaussHermiteRule& default_gauss_hermite();

}  // namespace z2amp
