#pragma once

#include <cmath>
#include <vector>

#include "potlab/field.hpp"
#include "potlab/special_functions.hpp"
#include "potlab/spectral.hpp"
#include "potlab/sphere.hpp"

namespace potlab {

/// Multilinear interpolation of grid samples at an arbitrary point (periodic wrap).
inline double interpolate(const std::vector<double>& v, const Grid& g, const Point& p) {
  const int n = g.dim;
  std::array<int, 3> i0{0, 0, 0};
  std::array<double, 3> t{0.0, 0.0, 0.0};
  for (int a = 0; a < n; ++a) {
    const double s = (p[a] + 0.5 * g.box_len) / g.spacing() - 0.5;
    const double fl = std::floor(s);
    i0[a] = static_cast<int>(fl);
    t[a] = s - fl;
  }
  double out = 0.0;
  for (int corner = 0; corner < (1 << n); ++corner) {
    std::array<int, 3> k{0, 0, 0};
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      const int bit = (corner >> a) & 1;
      k[a] = ((i0[a] + bit) % g.pts + g.pts) % g.pts;
      w *= bit ? t[a] : 1.0 - t[a];
    }
    out += w * v[g.flat(k)];
  }
  return out;
}

inline void check_flux_radius(const Grid& g, double r) {
  if (!(r > 0.0) || !(r < 0.5 * g.box_len)) throw RadiusOutOfRange("flux radius must lie in (0, L/2)");
}

/// P(v; r) = int_{S^{n-1}} omega . v(r omega) d omega (unit-sphere angle measure).
inline double flux_functional(const VectorField& v, double r, const SphereQuadrature& quad) {
  check_flux_radius(v.grid, r);
  require(quad.dim == v.dim(), "sphere quadrature dimension mismatch");
  return quad.integrate([&](const Point& w) {
    const Point y{r * w[0], r * w[1], r * w[2]};
    double s = 0.0;
    for (int j = 0; j < v.dim(); ++j) s += w[j] * interpolate(v.comp[j], v.grid, y);
    return s;
  });
}

/// Flux through the sphere |y| = r with surface measure: r^{n-1} P(v; r).
inline double surface_flux(const VectorField& v, double r, const SphereQuadrature& quad) {
  return std::pow(r, v.dim() - 1) * flux_functional(v, r, quad);
}

/// curl u: entry(i, j) = d u_i/d x_j - d u_j/d x_i, skew-symmetric exactly.
inline MatrixField matrix_curl(const VectorField& u) {
  const MatrixField D = spectral::jacobian(u);
  const int n = u.dim();
  MatrixField F(u.grid);
  F.skew_symmetric = true;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto& a = F.entry(i, j);
      auto& b = F.entry(j, i);
      for (std::size_t c = 0; c < a.size(); ++c) {
        a[c] = D.entry(i, j)[c] - D.entry(j, i)[c];
        b[c] = -a[c];
      }
    }
  return F;
}

/// Div F = (div F_1, ..., div F_n) with F_j = (F_1j, ..., F_nj) the j-th column.
inline VectorField row_divergence(const MatrixField& F) {
  VectorField out(F.grid);
  for (int j = 0; j < F.grid.dim; ++j) out.comp[j] = spectral::divergence(F.column(j)).values;
  return out;
}

/// curl (-Delta)^{-1} f.
inline MatrixField curl_inverse_laplacian(const VectorField& f) {
  return matrix_curl(spectral::frac_laplacian_power(f, -2.0));
}

/// Fourier transform of the indicator of the ball |x| < rho at frequency |xi| = k.
inline double ball_transform(int n, double rho, double k) {
  const double t = rho * k;
  if (n == 2) {
    if (t < 1e-3) return pi * rho * rho * (1.0 - t * t / 8.0);
    return 2.0 * pi * rho * std::cyl_bessel_j(1.0, t) / k;
  }
  if (t < 1e-3) return 4.0 * pi * rho * rho * rho / 3.0 * (1.0 - t * t / 10.0);
  return 4.0 * pi * (std::sin(t) - t * std::cos(t)) / (k * k * k);
}

/// Integral over |y| < rho of the trigonometric interpolant of grid samples.
inline double ball_integral(const std::vector<double>& v, const Grid& g, double rho) {
  const auto c = spectral::detail::forward_raw(v, g);
  const auto t = spectral::detail::axis_table(g);
  std::vector<double> terms(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.index(i);
    double k2 = 0.0;
    for (int a = 0; a < g.dim; ++a) k2 += t.xi[idx[a]] * t.xi[idx[a]];
    const auto coeff = c[i] * spectral::detail::phase(g, t, idx, -1);
    terms[i] = coeff.real() * ball_transform(g.dim, rho, std::sqrt(k2));
  }
  return pairwise_sum(terms) * g.cell_volume() / std::pow(g.box_len, g.dim);
}

/// Result of comparing both sides of the flux recursion at radius r.
struct FluxRecursion {
  int column = 0;
  double lhs = 0.0;        // int_{|z| = r} (z/|z|, G_j(z)) d omega
  double rhs = 0.0;        // 2^{n-1} (n-1)/n P(F_j; 2r)
  double green_flux = 0.0; // -(2r)^{1-n} int_{|y| > 2r} div F_j dy, equals P(F_j; 2r)
};

/// G_ij(x) = |S|^{-1} |x|^{1-n} (x_j/|x| I_i - x_i/|x| I_j), I_k = int_{|y|>2|x|} (Div F)_k dy
/// (outer integral taken on the trigonometric interpolant); both sides of the recursion for column j.
inline FluxRecursion flux_recursion(const MatrixField& F, const VectorField& divF, int j, double r,
                                    const SphereQuadrature& quad) {
  const Grid& g = F.grid;
  const int n = g.dim;
  check_flux_radius(g, 2.0 * r);
  std::vector<double> I(n, 0.0);
  for (int k = 0; k < n; ++k) I[k] = integral(divF.comp[k], g) - ball_integral(divF.comp[k], g, 2.0 * r);
  const double S = sphere_area(n);
  const double scale = std::pow(r, 1 - n) / S;
  FluxRecursion out;
  out.column = j;
  out.lhs = quad.integrate([&](const Point& w) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * scale * (w[j] * I[i] - w[i] * I[j]);
    return s;
  });
  const double p2r = flux_functional(F.column(j), 2.0 * r, quad);
  out.rhs = std::pow(2.0, n - 1) * (n - 1.0) / n * p2r;
  out.green_flux = -std::pow(2.0 * r, 1 - n) * I[j];
  return out;
}

}  // namespace potlab
