#pragma once

#include <cmath>
#include <vector>

#include "potlab/grid.hpp"
#include "potlab/special_functions.hpp"

namespace potlab {

/// Nodes and weights on the unit sphere S^{n-1}; weights sum to |S^{n-1}|.
struct SphereQuadrature {
  int dim = 2;
  std::vector<Point> nodes;
  std::vector<double> weights;

  template <class F>
  double integrate(F&& f) const {
    std::vector<double> t(nodes.size());
    for (std::size_t m = 0; m < nodes.size(); ++m) t[m] = weights[m] * f(nodes[m]);
    return pairwise_sum(t);
  }
};

/// n = 2: 512 equispaced angles. n = 3: 256 Fibonacci-spiral nodes on
/// variance-corrected z levels, replicated under the four quarter turns about
/// e_3 (1024 nodes); first and second moments are exact.
inline SphereQuadrature make_sphere_quadrature(int n) {
  require(n == 2 || n == 3, "sphere quadrature: n must be 2 or 3");
  SphereQuadrature q;
  q.dim = n;
  if (n == 2) {
    constexpr int M = 512;
    for (int m = 0; m < M; ++m) {
      const double t = 2.0 * pi * (m + 0.5) / M;
      q.nodes.push_back({std::cos(t), std::sin(t), 0.0});
    }
    q.weights.assign(M, 2.0 * pi / M);
    return q;
  }
  constexpr int M = 256;
  const double golden = pi * (3.0 - std::sqrt(5.0));
  const double stretch = std::sqrt(double(M) * M / (double(M) * M - 1.0));
  for (int turn = 0; turn < 4; ++turn) {
    for (int i = 0; i < M; ++i) {
      const double z = (1.0 - (2.0 * i + 1.0) / M) * stretch;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i + 0.5 * pi * turn;
      q.nodes.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
  }
  q.weights.assign(4 * M, 4.0 * pi / (4 * M));
  return q;
}

}  // namespace potlab
