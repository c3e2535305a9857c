#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "potlab/grid.hpp"
#include "potlab/special_functions.hpp"
#include "potlab/sphere.hpp"

namespace potlab {

enum class MatrixKernelKind { M, M_half, N };

inline MatrixKernelKind parse_matrix_kernel(const std::string& s) {
  if (s == "M") return MatrixKernelKind::M;
  if (s == "M_half") return MatrixKernelKind::M_half;
  if (s == "N") return MatrixKernelKind::N;
  throw InvalidArgument("unknown matrix kernel '" + s + "'");
}

/// K(omega) = omega omega^T - s I with s = 1/n (M), 1/2 (M_half) or 0 (N).
struct MatrixKernel {
  MatrixKernelKind kind = MatrixKernelKind::M;
  int dim = 2;

  double shift() const {
    switch (kind) {
      case MatrixKernelKind::M:
        return 1.0 / dim;
      case MatrixKernelKind::M_half:
        return 0.5;
      case MatrixKernelKind::N:
        return 0.0;
    }
    return 0.0;
  }

  double entry(const Point& w, int j, int k) const { return w[j] * w[k] - (j == k ? shift() : 0.0); }

  /// (K(w) a, b) for unit w.
  double pair(const Point& w, const double* a, const double* b) const {
    double wa = 0.0, wb = 0.0, ab = 0.0;
    for (int j = 0; j < dim; ++j) {
      wa += w[j] * a[j];
      wb += w[j] * b[j];
      ab += a[j] * b[j];
    }
    return wa * wb - shift() * ab;
  }

  /// Diagonal of the kernel averaged over directions from a cube centre: 1/n - s.
  double cell_mean_diag() const { return 1.0 / dim - shift(); }
};

enum class IntegrandFamily { abs_power_combo, quadratic_form, norm_power };

/// Positively q-homogeneous Phi: R^n -> R.
///   abs_power_combo: Phi(v) = sum_j a_j |v_j|^q
///   quadratic_form:  Phi(v) = sum_ij a_ij v_i v_j   (degree 2)
///   norm_power:      Phi(v) = a_0 |v|^q
struct HomogeneousIntegrand {
  IntegrandFamily family = IntegrandFamily::abs_power_combo;
  double degree = 1.0;
  std::vector<double> coeffs;

  double operator()(const double* v, int n) const {
    double s = 0.0;
    if (family == IntegrandFamily::abs_power_combo) {
      for (int j = 0; j < n; ++j) s += coeffs[j] * std::pow(std::abs(v[j]), degree);
    } else if (family == IntegrandFamily::norm_power) {
      double r2 = 0.0;
      for (int j = 0; j < n; ++j) r2 += v[j] * v[j];
      s = coeffs[0] * std::pow(r2, 0.5 * degree);
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += coeffs[i * n + j] * v[i] * v[j];
    }
    return s;
  }
  double operator()(const Point& v, int n) const { return (*this)(v.data(), n); }

  /// int_{S^{n-1}} Phi d omega.
  double sphere_integral(const SphereQuadrature& q) const {
    return q.integrate([&](const Point& w) { return (*this)(w, q.dim); });
  }

  /// Closed form of the sphere integral.
  double exact_sphere_integral(int n) const {
    if (family == IntegrandFamily::norm_power) return coeffs[0] * sphere_area(n);
    double s = 0.0;
    if (family == IntegrandFamily::quadratic_form) {
      for (int i = 0; i < n; ++i) s += coeffs[i * n + i];
      return s * sphere_area(n) / n;
    }
    for (int j = 0; j < n; ++j) s += coeffs[j];
    // int_{S^{n-1}} |w_1|^q = 2 pi^{(n-1)/2} Gamma((q+1)/2) / Gamma((n+q)/2)
    return s * 2.0 * std::pow(pi, 0.5 * (n - 1)) * gamma_fn(0.5 * (degree + 1.0)) / gamma_fn(0.5 * (n + degree));
  }
};

inline HomogeneousIntegrand abs_power_combo(std::vector<double> a, double q) {
  require(q > 0.0, "integrand degree must be positive");
  return {IntegrandFamily::abs_power_combo, q, std::move(a)};
}

inline HomogeneousIntegrand quadratic_form(std::vector<double> a) {
  return {IntegrandFamily::quadratic_form, 2.0, std::move(a)};
}

inline HomogeneousIntegrand norm_power(double a, double q) {
  require(q > 0.0, "integrand degree must be positive");
  return {IntegrandFamily::norm_power, q, {a}};
}

}  // namespace potlab
