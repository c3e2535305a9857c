#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "potlab/common.hpp"

namespace potlab {

using Point = std::array<double, 3>;  // unused trailing coordinates are 0

/// Uniform periodic lattice over the centred box [-L/2, L/2)^n.
/// Cell centres sit at (k + 1/2) h - L/2, so no sample lands on the origin.
struct Grid {
  int dim = 2;
  double box_len = 1.0;
  int pts = 8;

  double spacing() const { return box_len / pts; }
  double cell_volume() const { return std::pow(spacing(), dim); }
  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(pts);
    return s;
  }
  double coord(int k) const { return (k + 0.5) * spacing() - 0.5 * box_len; }

  /// Multi-index of a flat index; axis 0 is the slowest.
  std::array<int, 3> index(std::size_t flat) const {
    std::array<int, 3> k{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      k[a] = static_cast<int>(flat % pts);
      flat /= pts;
    }
    return k;
  }
  std::size_t flat(const std::array<int, 3>& k) const {
    std::size_t f = 0;
    for (int a = 0; a < dim; ++a) f = f * pts + static_cast<std::size_t>(k[a]);
    return f;
  }
  Point point(std::size_t flat_index) const {
    const auto k = index(flat_index);
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) x[a] = coord(k[a]);
    return x;
  }
  double radius(std::size_t flat_index) const {
    const Point x = point(flat_index);
    return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  }

  bool operator==(const Grid&) const = default;
};

namespace detail {

inline void validate_grid(int n, double L, int N, int max_pts) {
  if (n != 2 && n != 3) throw InvalidArgument("unsupported dimension " + std::to_string(n));
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("box length must be positive");
  if (N % 2 != 0) throw InvalidArgument("points per axis must be even, got " + std::to_string(N));
  if (N < 8 || N > max_pts)
    throw InvalidArgument("points per axis " + std::to_string(N) + " outside [8, " +
                          std::to_string(max_pts) + "]");
}

}  // namespace detail

/// User-facing grid constructor with the documented size limits
/// (N <= 256 for n = 2, N <= 64 for n = 3).
inline Grid make_grid(int n, double L, int N) {
  detail::validate_grid(n, L, N, n == 2 ? 256 : 64);
  return Grid{n, L, N};
}

/// Internal grids used for zero-padded (free-space) evaluation may be larger.
inline Grid make_padded_grid(int n, double L, int N) {
  detail::validate_grid(n, L, N, n == 2 ? 1024 : 256);
  return Grid{n, L, N};
}

}  // namespace potlab
