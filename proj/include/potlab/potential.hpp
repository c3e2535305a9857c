#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "potlab/fft.hpp"
#include "potlab/field.hpp"
#include "potlab/special_functions.hpp"
#include "potlab/spectral.hpp"

namespace potlab {

namespace detail {

/// Discrete convolution sum_y K(x - y) v(y) h^n over all cell pairs of a
/// grid, computed exactly (up to rounding) by FFT on the doubled lattice.
class LatticeConvolver {
 public:
  /// kern(d, out) fills out[0..ncomp) for a nonzero displacement d;
  /// self(out) fills the values used for d = 0.
  template <class K, class S>
  LatticeConvolver(const Grid& g, int ncomp, K&& kern, S&& self)
      : grid_(g), big_(make_padded_grid(g.dim, 2.0 * g.box_len, 2 * g.pts)) {
    std::vector<spectral::ComplexBuffer> k;
    for (int c = 0; c < ncomp; ++c) k.emplace_back(big_.size());
    std::vector<double> vals(ncomp);
    const double h = g.spacing();
    for (std::size_t i = 0; i < big_.size(); ++i) {
      const auto m = big_.index(i);
      Point d{0.0, 0.0, 0.0};
      bool zero = true;
      for (int a = 0; a < g.dim; ++a) {
        const int s = m[a] < g.pts ? m[a] : m[a] - 2 * g.pts;
        d[a] = s * h;
        zero = zero && s == 0;
      }
      if (zero)
        self(vals.data());
      else
        kern(d, vals.data());
      for (int c = 0; c < ncomp; ++c) k[c][i] = vals[c];
    }
    for (auto& b : k) spectral::fft_inplace(b, big_, -1);
    khat_ = std::move(k);
  }

  spectral::ComplexBuffer transform(const std::vector<double>& v) const {
    spectral::ComplexBuffer b(big_.size());
    for (std::size_t i = 0; i < v.size(); ++i) b[big_.flat(grid_.index(i))] = v[i];
    spectral::fft_inplace(b, big_, -1);
    return b;
  }

  /// sum over (component c, transformed input) pairs of K_c * v, restricted to the grid.
  std::vector<double> apply(const std::vector<std::pair<int, const spectral::ComplexBuffer*>>& terms) const {
    spectral::ComplexBuffer acc(big_.size());
    for (const auto& [c, vhat] : terms)
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += khat_[c][i] * (*vhat)[i];
    spectral::fft_inplace(acc, big_, +1);
    const double s = grid_.cell_volume() / static_cast<double>(big_.size());
    std::vector<double> out(grid_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = acc[big_.flat(grid_.index(i))].real() * s;
    return out;
  }

  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  Grid big_;
  std::vector<spectral::ComplexBuffer> khat_;
};

// Cell averages of the fundamental solution over a cube of side h centred at 0.
inline double gamma_cell_average(int n, double h) {
  if (n == 3) {
    const double c3 = 2.0 * (-0.25 * pi + 1.5 * std::log((std::sqrt(3.0) + 1.0) / (std::sqrt(3.0) - 1.0)));
    return c3 / (4.0 * pi * h);
  }
  const double c2 = 0.5 * std::log(2.0) - 1.5 + 0.25 * pi + std::log(0.5);
  return -(std::log(h) + c2) / (2.0 * pi);
}

}  // namespace detail

/// Fundamental solution of -Delta: -(1/2 pi) log|x| (n = 2), 1/(4 pi |x|) (n = 3).
inline double fundamental_solution(int n, double r) {
  return n == 2 ? -std::log(r) / (2.0 * pi) : 1.0 / (4.0 * pi * r);
}

/// u = Gamma * f by midpoint quadrature; the self cell uses the exact cell
/// average of Gamma. n = 2 requires mean-zero f.
inline ScalarField newtonian_potential(const ScalarField& f) {
  const int n = f.grid.dim;
  if (n == 2) spectral::detail::require_mean_zero(f.values, "newtonian_potential");
  const double self = detail::gamma_cell_average(n, f.grid.spacing());
  detail::LatticeConvolver conv(
      f.grid, 1,
      [n](const Point& d, double* out) {
        out[0] = fundamental_solution(n, std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]));
      },
      [self](double* out) { out[0] = self; });
  const auto fh = conv.transform(f.values);
  return ScalarField(f.grid, conv.apply({{0, &fh}}));
}

namespace detail {

inline bool same_cell(const Grid& g, const Point& y, const Point& x) {
  const double half = 0.5 * g.spacing();
  for (int a = 0; a < g.dim; ++a)
    if (!(std::abs(y[a] - x[a]) < half)) return false;
  return true;
}

inline double dist(const Point& a, const Point& b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace detail

/// grad u(x) = (1/|S^{n-1}|) int (y - x)/|y - x|^n f(y) dy by midpoint rule,
/// skipping the cell that contains x.
inline Point gradient_kernel_apply(const ScalarField& f, const Point& x) {
  const Grid& g = f.grid;
  const int n = g.dim;
  const double inv_s = 1.0 / sphere_area(n);
  std::array<std::vector<double>, 3> terms;
  for (auto& t : terms) t.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (f.values[i] == 0.0) continue;
    const Point y = g.point(i);
    if (detail::same_cell(g, y, x)) continue;
    const double r = detail::dist(y, x, n);
    const double w = f.values[i] * std::pow(r, -n);
    for (int a = 0; a < n; ++a) terms[a].push_back((y[a] - x[a]) * w);
  }
  Point out{0.0, 0.0, 0.0};
  for (int a = 0; a < n; ++a) out[a] = pairwise_sum(terms[a]) * inv_s * g.cell_volume();
  return out;
}

/// The four pieces of grad u(x) split by the regions |y| < |x|/2,
/// |x|/2 <= |y| <= 2|x| and |y| > 2|x|; A4 = -(1/|S|) x/|x|^n int_{|y|<|x|/2} f.
struct ADecomposition {
  std::array<Point, 4> A{};
  Point sum(int n) const {
    Point s{0.0, 0.0, 0.0};
    for (int a = 0; a < n; ++a) s[a] = A[0][a] + A[1][a] + A[2][a] + A[3][a];
    return s;
  }
};

inline ADecomposition a_decomposition(const ScalarField& f, const Point& x) {
  const Grid& g = f.grid;
  const int n = g.dim;
  const double rx = detail::dist(x, Point{0.0, 0.0, 0.0}, n);
  require(rx > 0.0, "a_decomposition: x must be nonzero");
  const double inv_s = 1.0 / sphere_area(n);
  const double hn = g.cell_volume();
  const double xn = std::pow(rx, -n);
  std::array<std::array<std::vector<double>, 3>, 3> t;  // region, component
  std::vector<double> inner_mass;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (f.values[i] == 0.0) continue;
    const Point y = g.point(i);
    if (detail::same_cell(g, y, x)) continue;
    const double ry = detail::dist(y, Point{0.0, 0.0, 0.0}, n);
    const double r = detail::dist(y, x, n);
    const double w = f.values[i] * std::pow(r, -n);
    if (ry < 0.5 * rx) {
      for (int a = 0; a < n; ++a) t[0][a].push_back((y[a] - x[a]) * w + x[a] * xn * f.values[i]);
      inner_mass.push_back(f.values[i]);
    } else {
      const int region = ry <= 2.0 * rx ? 1 : 2;
      for (int a = 0; a < n; ++a) t[region][a].push_back((y[a] - x[a]) * w);
    }
  }
  ADecomposition d;
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < n; ++a) d.A[k][a] = pairwise_sum(t[k][a]) * inv_s * hn;
  const double m = pairwise_sum(inner_mass) * hn;
  for (int a = 0; a < n; ++a) d.A[3][a] = -inv_s * x[a] * xn * m;
  return d;
}

}  // namespace potlab
