#pragma once

#include <cmath>
#include <vector>

#include "potlab/kernels.hpp"
#include "potlab/potential.hpp"
#include "potlab/special_functions.hpp"

namespace potlab {

enum class FormPath { direct, accelerated };

namespace detail {

struct SupportCells {
  std::vector<Point> x;
  std::vector<std::array<double, 3>> v;
};

inline SupportCells support_cells(const VectorField& g) {
  SupportCells s;
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    std::array<double, 3> v{0.0, 0.0, 0.0};
    bool any = false;
    for (int j = 0; j < g.dim(); ++j) {
      v[j] = g.comp[j][i];
      any = any || v[j] != 0.0;
    }
    if (!any) continue;
    s.x.push_back(g.grid.point(i));
    s.v.push_back(v);
  }
  return s;
}

/// sum over ordered pairs (x != y) of pair(omega, t, g(x), g(y)) plus
/// self_diag * sum |g(x)|^2, times h^{2n}.
template <class Pair>
double direct_double_sum(const VectorField& g, double self_diag, Pair&& pair) {
  const auto s = support_cells(g);
  const int n = g.dim();
  const std::size_t P = s.x.size();
  std::vector<double> rows(P);
  std::vector<double> row;
  for (std::size_t a = 0; a < P; ++a) {
    row.assign(P, 0.0);
    for (std::size_t b = 0; b < P; ++b) {
      if (a == b) {
        double m2 = 0.0;
        for (int j = 0; j < n; ++j) m2 += s.v[a][j] * s.v[a][j];
        row[b] = self_diag * m2;
        continue;
      }
      Point w{0.0, 0.0, 0.0};
      double t2 = 0.0;
      for (int j = 0; j < n; ++j) {
        w[j] = s.x[a][j] - s.x[b][j];
        t2 += w[j] * w[j];
      }
      const double t = std::sqrt(t2);
      for (int j = 0; j < n; ++j) w[j] /= t;
      row[b] = pair(w, t, s.v[a].data(), s.v[b].data());
    }
    rows[a] = pairwise_sum(row);
  }
  const double hn = g.grid.cell_volume();
  return pairwise_sum(rows) * hn * hn;
}

/// Same sum through lattice convolution with the kernel matrix entries
/// entry(w, t, j, k) and self value self_diag * delta_jk.
template <class Entry>
double convolved_double_sum(const VectorField& g, double self_diag, Entry&& entry) {
  const int n = g.dim();
  LatticeConvolver conv(
      g.grid, n * n,
      [&](const Point& d, double* out) {
        const double t = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        const Point w{d[0] / t, d[1] / t, d[2] / t};
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) out[j * n + k] = entry(w, t, j, k);
      },
      [&](double* out) {
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) out[j * n + k] = j == k ? self_diag : 0.0;
      });
  std::vector<spectral::ComplexBuffer> gh;
  for (int k = 0; k < n; ++k) gh.push_back(conv.transform(g.comp[k]));
  std::vector<double> terms;
  terms.reserve(g.grid.size() * n);
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<int, const spectral::ComplexBuffer*>> t;
    for (int k = 0; k < n; ++k) t.push_back({j * n + k, &gh[k]});
    const auto out = conv.apply(t);
    for (std::size_t i = 0; i < out.size(); ++i) terms.push_back(g.comp[j][i] * out[i]);
  }
  return pairwise_sum(terms) * g.grid.cell_volume();
}

}  // namespace detail

/// int int (K((x - y)/|x - y|) g(x), g(y)) dx dy by midpoint rule over all
/// cell pairs. A self pair contributes the cell average of K, which is 0 for M.
inline double matrix_kernel_form(const VectorField& g, MatrixKernelKind kind,
                                 FormPath path = FormPath::direct) {
  const MatrixKernel K{kind, g.dim()};
  if (path == FormPath::direct)
    return detail::direct_double_sum(g, K.cell_mean_diag(),
                                     [&K](const Point& w, double, const double* a, const double* b) {
                                       return K.pair(w, a, b);
                                     });
  return detail::convolved_double_sum(g, K.cell_mean_diag(),
                                      [&K](const Point& w, double, int j, int k) { return K.entry(w, j, k); });
}

/// scale * sum_{y != x} K((x - y)/|x - y|) g(y) h^n.
inline VectorField kernel_convolution(const VectorField& g, MatrixKernelKind kind, double scale) {
  const int n = g.dim();
  const MatrixKernel K{kind, n};
  detail::LatticeConvolver conv(
      g.grid, n * n,
      [&](const Point& d, double* out) {
        const double t = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        const Point w{d[0] / t, d[1] / t, d[2] / t};
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) out[j * n + k] = scale * K.entry(w, j, k);
      },
      [&](double* out) {
        for (int c = 0; c < n * n; ++c) out[c] = 0.0;
      });
  std::vector<spectral::ComplexBuffer> gh;
  for (int k = 0; k < n; ++k) gh.push_back(conv.transform(g.comp[k]));
  VectorField out(g.grid);
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<int, const spectral::ComplexBuffer*>> t;
    for (int k = 0; k < n; ++k) t.push_back({j * n + k, &gh[k]});
    out.comp[j] = conv.apply(t);
  }
  return out;
}

/// t K_1(t); equals 1 in the limit t -> 0.
inline double t_bessel_k1(double t) { return t == 0.0 ? 1.0 : t * bessel_k1(t); }

/// int int c (w.g(x)) (w.g(y)) t K_1(t) dx dy with t = |x - y|; a self pair
/// contributes c |g|^2 / n.
inline double bessel_kernel_form(const VectorField& g, double c, FormPath path = FormPath::direct) {
  const int n = g.dim();
  if (path == FormPath::direct)
    return detail::direct_double_sum(g, c / n, [c, n](const Point& w, double t, const double* a, const double* b) {
      double wa = 0.0, wb = 0.0;
      for (int j = 0; j < n; ++j) {
        wa += w[j] * a[j];
        wb += w[j] * b[j];
      }
      return c * wa * wb * t_bessel_k1(t);
    });
  return detail::convolved_double_sum(
      g, c / n, [c](const Point& w, double t, int j, int k) { return c * w[j] * w[k] * t_bessel_k1(t); });
}

}  // namespace potlab
