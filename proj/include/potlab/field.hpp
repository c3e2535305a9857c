#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "potlab/grid.hpp"

namespace potlab {

inline constexpr double unbounded_support = std::numeric_limits<double>::infinity();

struct ScalarField {
  Grid grid;
  std::vector<double> values;
  double support_radius = unbounded_support;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double support = unbounded_support)
      : grid(g), values(g.size(), 0.0), support_radius(support) {}
  ScalarField(const Grid& g, std::vector<double> v, double support = unbounded_support)
      : grid(g), values(std::move(v)), support_radius(support) {
    require(values.size() == grid.size(), "scalar field size does not match grid");
  }
};

struct VectorField {
  Grid grid;
  std::vector<std::vector<double>> comp;
  double support_radius = unbounded_support;

  VectorField() = default;
  explicit VectorField(const Grid& g, double support = unbounded_support)
      : grid(g), comp(g.dim, std::vector<double>(g.size(), 0.0)), support_radius(support) {}

  int dim() const { return grid.dim; }
  ScalarField component(int j) const { return ScalarField(grid, comp[j], support_radius); }
};

/// n x n matrix of scalar samples, entries stored row-major: entry(i, j).
struct MatrixField {
  Grid grid;
  std::vector<std::vector<double>> entries;
  bool skew_symmetric = false;

  MatrixField() = default;
  explicit MatrixField(const Grid& g)
      : grid(g), entries(g.dim * g.dim, std::vector<double>(g.size(), 0.0)) {}

  std::vector<double>& entry(int i, int j) { return entries[i * grid.dim + j]; }
  const std::vector<double>& entry(int i, int j) const { return entries[i * grid.dim + j]; }

  /// Column j as a vector field: F_j = (F_1j, ..., F_nj).
  VectorField column(int j) const {
    VectorField v(grid);
    for (int i = 0; i < grid.dim; ++i) v.comp[i] = entry(i, j);
    return v;
  }
};

/// Pointwise Euclidean (vector) or Frobenius (matrix) magnitude.
inline std::vector<double> pointwise_norm(const std::vector<std::vector<double>>& parts) {
  std::vector<double> out(parts.empty() ? 0 : parts.front().size(), 0.0);
  for (const auto& p : parts)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += p[i] * p[i];
  for (double& v : out) v = std::sqrt(v);
  return out;
}

inline std::vector<double> pointwise_norm(const VectorField& v) { return pointwise_norm(v.comp); }
inline std::vector<double> pointwise_norm(const MatrixField& m) { return pointwise_norm(m.entries); }

inline double integral(const std::vector<double>& values, const Grid& g) {
  return pairwise_sum(values) * g.cell_volume();
}
inline double integral(const ScalarField& f) { return integral(f.values, f.grid); }

inline double l1_norm(const std::vector<double>& values, const Grid& g) {
  std::vector<double> a(values.size());
  std::transform(values.begin(), values.end(), a.begin(), [](double x) { return std::abs(x); });
  return pairwise_sum(a) * g.cell_volume();
}
inline double l1_norm(const ScalarField& f) { return l1_norm(f.values, f.grid); }
inline double l1_norm(const VectorField& v) { return l1_norm(pointwise_norm(v), v.grid); }
inline double l1_norm(const MatrixField& m) { return l1_norm(pointwise_norm(m), m.grid); }

inline double l2_norm(const std::vector<double>& values, const Grid& g) {
  std::vector<double> a(values.size());
  std::transform(values.begin(), values.end(), a.begin(), [](double x) { return x * x; });
  return std::sqrt(pairwise_sum(a) * g.cell_volume());
}

/// Componentwise integrals of a vector field.
inline std::vector<double> integral(const VectorField& v) {
  std::vector<double> out;
  for (const auto& c : v.comp) out.push_back(integral(c, v.grid));
  return out;
}

inline ScalarField scaled(ScalarField f, double s) {
  for (double& x : f.values) x *= s;
  return f;
}
inline VectorField scaled(VectorField v, double s) {
  for (auto& c : v.comp)
    for (double& x : c) x *= s;
  return v;
}

inline VectorField add(VectorField a, const VectorField& b, double scale_b = 1.0) {
  require(a.grid == b.grid, "vector fields live on different grids");
  for (int j = 0; j < a.dim(); ++j)
    for (std::size_t i = 0; i < a.comp[j].size(); ++i) a.comp[j][i] += scale_b * b.comp[j][i];
  a.support_radius = std::max(a.support_radius, b.support_radius);
  return a;
}

/// Field supported in a box of side L placed inside a box of side factor*L
/// (same spacing, centred, zero outside). Used for free-space evaluation.
inline std::vector<double> embed_values(const std::vector<double>& v, const Grid& from,
                                        const Grid& to) {
  const int off = (to.pts - from.pts) / 2;
  std::vector<double> out(to.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto k = from.index(i);
    for (int a = 0; a < from.dim; ++a) k[a] += off;
    out[to.flat(k)] = v[i];
  }
  return out;
}

inline std::vector<double> restrict_values(const std::vector<double>& v, const Grid& from,
                                           const Grid& to) {
  const int off = (from.pts - to.pts) / 2;
  std::vector<double> out(to.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto k = to.index(i);
    for (int a = 0; a < to.dim; ++a) k[a] += off;
    out[i] = v[from.flat(k)];
  }
  return out;
}

inline Grid embedding_grid(const Grid& g, int factor) {
  require(factor >= 1, "embedding factor must be >= 1");
  return make_padded_grid(g.dim, g.box_len * factor, g.pts * factor);
}

inline ScalarField embed(const ScalarField& f, int factor) {
  const Grid big = embedding_grid(f.grid, factor);
  return ScalarField(big, embed_values(f.values, f.grid, big), f.support_radius);
}
inline VectorField embed(const VectorField& f, int factor) {
  const Grid big = embedding_grid(f.grid, factor);
  VectorField out(big, f.support_radius);
  for (int j = 0; j < f.dim(); ++j) out.comp[j] = embed_values(f.comp[j], f.grid, big);
  return out;
}

}  // namespace potlab
