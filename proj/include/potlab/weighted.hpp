#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "potlab/field.hpp"
#include "potlab/kernels.hpp"
#include "potlab/spectral.hpp"

namespace potlab {

/// Exponent n(q - 1) - q of the weight |x|^{n(q-1)-q}.
inline double weight_exponent(int n, double q) { return n * (q - 1.0) - q; }

inline double critical_exponent(int n) { return n / (n - 1.0); }

/// 1 <= q < n/(n-1); q at or above the critical value only in probe mode.
inline void check_q(int n, double q, bool probe_mode) {
  if (!(q >= 1.0)) throw QOutOfRange("q must be >= 1");
  if (q >= critical_exponent(n) && !probe_mode)
    throw QOutOfRange("q = " + std::to_string(q) + " is not below n/(n-1); enable probe mode");
}

/// (sum |F(x)|^q |x|^{n(q-1)-q} h^n)^{1/q} over all cells, with |F| given pointwise.
inline double weighted_lq_norm(const std::vector<double>& abs_values, const Grid& g, double q,
                               bool probe_mode = false) {
  check_q(g.dim, q, probe_mode);
  const double e = weight_exponent(g.dim, q);
  std::vector<double> t(abs_values.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double a = std::abs(abs_values[i]);
    t[i] = a == 0.0 ? 0.0 : std::pow(a, q) * std::pow(g.radius(i), e);
  }
  return std::pow(pairwise_sum(t) * g.cell_volume(), 1.0 / q);
}

inline double weighted_lq_norm(const ScalarField& f, double q, bool probe_mode = false) {
  return weighted_lq_norm(f.values, f.grid, q, probe_mode);
}
inline double weighted_lq_norm(const VectorField& v, double q, bool probe_mode = false) {
  return weighted_lq_norm(pointwise_norm(v), v.grid, q, probe_mode);
}
inline double weighted_lq_norm(const MatrixField& m, double q, bool probe_mode = false) {
  return weighted_lq_norm(pointwise_norm(m), m.grid, q, probe_mode);
}

/// grad u for -Delta u = f, multiplier i xi/|xi|^2 on the periodic box.
inline VectorField potential_gradient(const ScalarField& f) {
  return spectral::gradient_inverse_laplacian(f);
}

/// 64 geometric radii from 2h to L/2.
inline std::vector<double> radius_ladder(const Grid& g, int count = 64) {
  require(count >= 2, "radius ladder needs at least two radii");
  const double r0 = 2.0 * g.spacing();
  const double r1 = 0.5 * g.box_len;
  std::vector<double> r(count);
  for (int i = 0; i < count; ++i) r[i] = r0 * std::pow(r1 / r0, double(i) / (count - 1));
  return r;
}

/// Values of int_{|x|<R} Phi(grad u) |x|^{n(q-1)-q} dx for each R of an
/// increasing ladder, given grad u on the grid.
inline std::vector<double> truncated_phi_integrals(const VectorField& grad_u, const HomogeneousIntegrand& phi,
                                                   double q, const std::vector<double>& radii,
                                                   bool probe_mode = false) {
  const Grid& g = grad_u.grid;
  check_q(g.dim, q, probe_mode);
  for (double R : radii)
    if (!(R > 0.0) || R > 0.5 * g.box_len * (1.0 + 1e-12))
      throw RadiusOutOfRange("truncation radius must lie in (0, L/2]");
  require(std::is_sorted(radii.begin(), radii.end()), "radius ladder must be increasing");
  const double e = weight_exponent(g.dim, q);
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> rad(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) rad[i] = g.radius(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rad[a] < rad[b]; });
  std::vector<double> out;
  out.reserve(radii.size());
  std::vector<double> shell;
  double acc = 0.0;
  std::size_t pos = 0;
  double v[3];
  for (double R : radii) {
    shell.clear();
    while (pos < order.size() && rad[order[pos]] < R) {
      const std::size_t i = order[pos++];
      for (int a = 0; a < g.dim; ++a) v[a] = grad_u.comp[a][i];
      shell.push_back(phi(v, g.dim) * std::pow(rad[i], e));
    }
    acc += pairwise_sum(shell);
    out.push_back(acc * g.cell_volume());
  }
  return out;
}

inline double truncated_phi_integral(const VectorField& grad_u, const HomogeneousIntegrand& phi, double q,
                                     double R, bool probe_mode = false) {
  return truncated_phi_integrals(grad_u, phi, q, {R}, probe_mode).front();
}

inline double truncated_phi_integral(const ScalarField& f, const HomogeneousIntegrand& phi, double q, double R,
                                     bool probe_mode = false) {
  return truncated_phi_integral(potential_gradient(f), phi, q, R, probe_mode);
}

}  // namespace potlab
