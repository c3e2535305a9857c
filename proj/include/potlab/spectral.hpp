#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "potlab/fft.hpp"
#include "potlab/field.hpp"

// Fourier convention: f^(xi) = int f(x) e^{-i<x,xi>} dx, inverse carries
// (2 pi)^{-n}. On the grid, xi_k = 2 pi k / L with k in [-N/2, N/2)^n.
namespace potlab::spectral {

/// Fourier coefficients of a real field, stored in FFT order.
struct SpectralField {
  Grid grid;
  ComplexBuffer coeffs;

  /// Signed wave number k in [-N/2, N/2)^n of a flat index.
  std::array<int, 3> wavenumber(std::size_t flat) const {
    auto k = grid.index(flat);
    for (int a = 0; a < grid.dim; ++a)
      if (k[a] >= grid.pts / 2) k[a] -= grid.pts;
    return k;
  }
  Point frequency(std::size_t flat) const {
    const auto k = wavenumber(flat);
    Point xi{0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim; ++a) xi[a] = 2.0 * pi * k[a] / grid.box_len;
    return xi;
  }
  /// Flat index of a signed wave number (taken modulo N).
  std::size_t flat_of(std::array<int, 3> k) const {
    for (int a = 0; a < grid.dim; ++a) k[a] = ((k[a] % grid.pts) + grid.pts) % grid.pts;
    return grid.flat(k);
  }
  const cplx& operator[](std::size_t i) const { return coeffs[i]; }
};

namespace detail {

struct AxisTable {
  std::vector<double> xi;     // true frequency
  std::vector<double> kappa;  // derivative wave number: xi, but 0 at the Nyquist index
};

inline AxisTable axis_table(const Grid& g) {
  AxisTable t;
  t.xi.resize(g.pts);
  t.kappa.resize(g.pts);
  for (int k = 0; k < g.pts; ++k) {
    const int s = k < g.pts / 2 ? k : k - g.pts;
    t.xi[k] = 2.0 * pi * s / g.box_len;
    t.kappa[k] = (k == g.pts / 2) ? 0.0 : t.xi[k];
  }
  return t;
}

/// Calls f(flat, kappa, |kappa|^2) for every mode in FFT order.
template <class F>
void for_each_mode(const Grid& g, F&& f) {
  const AxisTable t = axis_table(g);
  const int N = g.pts;
  std::size_t flat = 0;
  if (g.dim == 2) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j, ++flat) {
        const Point k{t.kappa[i], t.kappa[j], 0.0};
        f(flat, k, k[0] * k[0] + k[1] * k[1]);
      }
  } else {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l, ++flat) {
          const Point k{t.kappa[i], t.kappa[j], t.kappa[l]};
          f(flat, k, k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        }
  }
}

inline ComplexBuffer forward_raw(const std::vector<double>& v, const Grid& g) {
  ComplexBuffer buf(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) buf[i] = v[i];
  fft_inplace(buf, g, -1);
  return buf;
}

inline std::vector<double> inverse_real(ComplexBuffer& buf, const Grid& g) {
  fft_inplace(buf, g, +1);
  const double s = 1.0 / static_cast<double>(g.size());
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i].real() * s;
  return out;
}

inline double relative_mean(const std::vector<double>& v) {
  std::vector<double> a(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::abs(v[i]);
  const double l1 = pairwise_sum(a);
  if (l1 == 0.0) return 0.0;
  return std::abs(pairwise_sum(v)) / l1;
}

inline void require_mean_zero(const std::vector<double>& v, const std::string& op) {
  const double m = relative_mean(v);
  if (m > 1e-10) throw MeanNotZero(op + ": input mean is not zero (relative " + std::to_string(m) + ")");
}

inline void require_mean_zero(const VectorField& v, const std::string& op) {
  for (const auto& c : v.comp) require_mean_zero(c, op);
}

/// out_i = sum_j S_ij(kappa) in_j, with S supplied as sym(kappa, k2, in_hat, out_hat).
template <class Sym>
std::vector<std::vector<double>> apply_symbol(const std::vector<std::vector<double>>& in,
                                              const Grid& g, int out_count, Sym&& sym) {
  std::vector<ComplexBuffer> hin;
  hin.reserve(in.size());
  for (const auto& c : in) hin.push_back(forward_raw(c, g));
  std::vector<ComplexBuffer> hout;
  for (int i = 0; i < out_count; ++i) hout.emplace_back(g.size());
  std::array<cplx, 3> a{};
  std::array<cplx, 9> b{};
  for_each_mode(g, [&](std::size_t flat, const Point& k, double k2) {
    for (std::size_t j = 0; j < hin.size(); ++j) a[j] = hin[j][flat];
    for (int i = 0; i < out_count; ++i) b[i] = cplx{};
    sym(k, k2, a.data(), b.data());
    for (int i = 0; i < out_count; ++i) hout[i][flat] = b[i];
  });
  std::vector<std::vector<double>> out;
  out.reserve(out_count);
  for (auto& h : hout) out.push_back(inverse_real(h, g));
  return out;
}

/// Sum over modes of w(kappa, k2, in_hat) * (dxi)^n, where in_hat are the
/// true coefficients h^n * raw FFT (the phase factor cancels in |.|^2).
template <class W>
double mode_sum(const std::vector<std::vector<double>>& in, const Grid& g, W&& w) {
  std::vector<ComplexBuffer> hin;
  for (const auto& c : in) hin.push_back(forward_raw(c, g));
  const double hn = g.cell_volume();
  std::vector<double> terms(g.size());
  std::array<cplx, 3> a{};
  for_each_mode(g, [&](std::size_t flat, const Point& k, double k2) {
    for (std::size_t j = 0; j < hin.size(); ++j) a[j] = hin[j][flat] * hn;
    terms[flat] = w(k, k2, a.data());
  });
  return pairwise_sum(terms) * std::pow(2.0 * pi / g.box_len, g.dim);
}

inline cplx phase(const Grid& g, const AxisTable& t, const std::array<int, 3>& idx, int sign) {
  const double x0 = g.coord(0);
  double arg = 0.0;
  for (int a = 0; a < g.dim; ++a) arg += t.xi[idx[a]] * x0;
  return std::polar(1.0, sign * arg);
}

}  // namespace detail

inline SpectralField dft(const ScalarField& f) {
  const Grid& g = f.grid;
  SpectralField s{g, detail::forward_raw(f.values, g)};
  const auto t = detail::axis_table(g);
  const double hn = g.cell_volume();
  for (std::size_t i = 0; i < g.size(); ++i) s.coeffs[i] *= hn * detail::phase(g, t, g.index(i), -1);
  return s;
}

inline std::vector<SpectralField> dft(const VectorField& v) {
  std::vector<SpectralField> out;
  for (int j = 0; j < v.dim(); ++j) out.push_back(dft(v.component(j)));
  return out;
}

/// Inverse transform; returns the real part.
inline ScalarField idft(const SpectralField& s) {
  const Grid& g = s.grid;
  ComplexBuffer buf(s.coeffs);
  const auto t = detail::axis_table(g);
  const double inv_hn = 1.0 / g.cell_volume();
  for (std::size_t i = 0; i < g.size(); ++i) buf[i] *= inv_hn * detail::phase(g, t, g.index(i), +1);
  return ScalarField(g, detail::inverse_real(buf, g));
}

/// (-Delta)^{a/2}: multiplier |xi|^a, zero mode set to 0. a < 0 needs mean zero.
inline ScalarField frac_laplacian_power(const ScalarField& f, double a) {
  if (a == 0.0) return f;
  if (a < 0.0) detail::require_mean_zero(f.values, "frac_laplacian_power");
  auto out = detail::apply_symbol({f.values}, f.grid, 1,
                                  [a](const Point&, double k2, const cplx* in, cplx* o) {
                                    o[0] = k2 > 0.0 ? in[0] * std::pow(k2, 0.5 * a) : cplx{};
                                  });
  return ScalarField(f.grid, std::move(out[0]));
}

inline VectorField frac_laplacian_power(const VectorField& v, double a) {
  VectorField out(v.grid);
  for (int j = 0; j < v.dim(); ++j) out.comp[j] = frac_laplacian_power(v.component(j), a).values;
  return out;
}

inline VectorField gradient(const ScalarField& u) {
  const int n = u.grid.dim;
  auto out = detail::apply_symbol({u.values}, u.grid, n,
                                  [n](const Point& k, double, const cplx* in, cplx* o) {
                                    for (int j = 0; j < n; ++j) o[j] = cplx(0.0, k[j]) * in[0];
                                  });
  VectorField v(u.grid);
  v.comp = std::move(out);
  return v;
}

inline ScalarField divergence(const VectorField& v) {
  const int n = v.dim();
  auto out = detail::apply_symbol(v.comp, v.grid, 1,
                                  [n](const Point& k, double, const cplx* in, cplx* o) {
                                    cplx s{};
                                    for (int j = 0; j < n; ++j) s += cplx(0.0, k[j]) * in[j];
                                    o[0] = s;
                                  });
  return ScalarField(v.grid, std::move(out[0]));
}

/// Jacobi matrix: entry(i, j) = d u_i / d x_j.
inline MatrixField jacobian(const VectorField& u) {
  MatrixField m(u.grid);
  for (int i = 0; i < u.dim(); ++i) {
    const VectorField gi = gradient(u.component(i));
    for (int j = 0; j < u.dim(); ++j) m.entry(i, j) = gi.comp[j];
  }
  return m;
}

/// Riesz transform R, multiplier -i xi/|xi|. Note grad (-Delta)^{-1/2} = -R.
inline VectorField riesz_transform(const ScalarField& f) {
  detail::require_mean_zero(f.values, "riesz_transform");
  const int n = f.grid.dim;
  auto out = detail::apply_symbol({f.values}, f.grid, n,
                                  [n](const Point& k, double k2, const cplx* in, cplx* o) {
                                    if (k2 == 0.0) return;
                                    const double r = std::sqrt(k2);
                                    for (int j = 0; j < n; ++j) o[j] = cplx(0.0, -k[j] / r) * in[0];
                                  });
  VectorField v(f.grid);
  v.comp = std::move(out);
  return v;
}

/// grad (-Delta)^{-1} h, multiplier i xi / |xi|^2.
inline VectorField gradient_inverse_laplacian(const ScalarField& h) {
  detail::require_mean_zero(h.values, "gradient_inverse_laplacian");
  const int n = h.grid.dim;
  auto out = detail::apply_symbol({h.values}, h.grid, n,
                                  [n](const Point& k, double k2, const cplx* in, cplx* o) {
                                    if (k2 == 0.0) return;
                                    for (int j = 0; j < n; ++j) o[j] = cplx(0.0, k[j] / k2) * in[0];
                                  });
  VectorField v(h.grid);
  v.comp = std::move(out);
  return v;
}

/// Leray projection onto divergence-free fields, multiplier I - xi xi^T/|xi|^2.
inline VectorField leray_project(const VectorField& g) {
  detail::require_mean_zero(g, "leray_project");
  const int n = g.dim();
  auto out = detail::apply_symbol(g.comp, g.grid, n,
                                  [n](const Point& k, double k2, const cplx* in, cplx* o) {
                                    if (k2 == 0.0) return;
                                    cplx d{};
                                    for (int j = 0; j < n; ++j) d += k[j] * in[j];
                                    for (int j = 0; j < n; ++j) o[j] = in[j] - k[j] * d / k2;
                                  });
  VectorField v(g.grid);
  v.comp = std::move(out);
  return v;
}

/// (-Delta)^{-n/2} (g + n (-Delta)^{-1} grad div g).
inline VectorField cr_operator(const VectorField& g) {
  detail::require_mean_zero(g, "cr_operator");
  const int n = g.dim();
  auto out = detail::apply_symbol(g.comp, g.grid, n,
                                  [n](const Point& k, double k2, const cplx* in, cplx* o) {
                                    if (k2 == 0.0) return;
                                    cplx d{};
                                    for (int j = 0; j < n; ++j) d += k[j] * in[j];
                                    const double s = std::pow(k2, -0.5 * n);
                                    for (int j = 0; j < n; ++j) o[j] = (in[j] - double(n) * k[j] * d / k2) * s;
                                  });
  VectorField v(g.grid);
  v.comp = std::move(out);
  return v;
}

/// Classical curl of a three-component field.
inline VectorField curl3(const VectorField& v) {
  require(v.dim() == 3, "curl3 needs a three-dimensional field");
  auto out = detail::apply_symbol(v.comp, v.grid, 3, [](const Point& k, double, const cplx* in, cplx* o) {
    const cplx I(0.0, 1.0);
    o[0] = I * (k[1] * in[2] - k[2] * in[1]);
    o[1] = I * (k[2] * in[0] - k[0] * in[2]);
    o[2] = I * (k[0] * in[1] - k[1] * in[0]);
  });
  VectorField r(v.grid);
  r.comp = std::move(out);
  return r;
}

/// Homogeneous norm (int |f^|^2 |xi|^{2l} dxi)^{1/2} by the rectangle rule.
/// The zero mode is kept for l = 0 and dropped for l < 0.
inline double sobolev_norm_homog(const VectorField& v, double l) {
  if (l < 0.0) detail::require_mean_zero(v, "sobolev_norm_homog");
  const int n = v.dim();
  const double s = detail::mode_sum(v.comp, v.grid, [n, l](const Point&, double k2, const cplx* a) {
    double m2 = 0.0;
    for (int j = 0; j < n; ++j) m2 += std::norm(a[j]);
    if (l == 0.0) return m2;
    if (k2 == 0.0) return 0.0;
    return m2 * std::pow(k2, l);
  });
  return std::sqrt(s);
}

inline double sobolev_norm_homog(const ScalarField& f, double l) {
  VectorField v(f.grid);
  v.comp.assign(1, f.values);
  if (l < 0.0) detail::require_mean_zero(f.values, "sobolev_norm_homog");
  const double s = detail::mode_sum(v.comp, f.grid, [l](const Point&, double k2, const cplx* a) {
    if (l == 0.0) return std::norm(a[0]);
    if (k2 == 0.0) return 0.0;
    return std::norm(a[0]) * std::pow(k2, l);
  });
  return std::sqrt(s);
}

/// Inhomogeneous norm (int |f^|^2 (|xi|^2 + 1)^{l/2} dxi)^{1/2}.
inline double sobolev_norm_inhomog(const VectorField& v, double l) {
  const int n = v.dim();
  const double s = detail::mode_sum(v.comp, v.grid, [n, l](const Point&, double k2, const cplx* a) {
    double m2 = 0.0;
    for (int j = 0; j < n; ++j) m2 += std::norm(a[j]);
    return m2 * std::pow(k2 + 1.0, 0.5 * l);
  });
  return std::sqrt(s);
}

inline double sobolev_norm_inhomog(const ScalarField& f, double l) {
  VectorField v(f.grid);
  v.comp.assign(1, f.values);
  return sobolev_norm_inhomog(v, l);
}

/// (2 pi)^{-n} ( ||g||^2_{H^{-n/2}} - c1 ||div g||^2_{H^{-1-n/2}} ), one pass over modes.
inline double negative_order_form(const VectorField& g, double c1) {
  detail::require_mean_zero(g, "negative_order_form");
  const int n = g.dim();
  const double s = detail::mode_sum(g.comp, g.grid, [n, c1](const Point& k, double k2, const cplx* a) {
    if (k2 == 0.0) return 0.0;
    double m2 = 0.0;
    cplx d{};
    for (int j = 0; j < n; ++j) {
      m2 += std::norm(a[j]);
      d += k[j] * a[j];
    }
    return (m2 - c1 * std::norm(d) / k2) * std::pow(k2, -0.5 * n);
  });
  return s / std::pow(2.0 * pi, n);
}

/// Bessel-potential analogue: (2 pi)^{-n} int (|g^|^2 (|xi|^2+1) - n|xi.g^|^2) (|xi|^2+1)^{-1-n/2}.
inline double inhomogeneous_form(const VectorField& g) {
  const int n = g.dim();
  const double s = detail::mode_sum(g.comp, g.grid, [n](const Point& k, double k2, const cplx* a) {
    double m2 = 0.0;
    cplx d{};
    for (int j = 0; j < n; ++j) {
      m2 += std::norm(a[j]);
      d += k[j] * a[j];
    }
    return (m2 * (k2 + 1.0) - n * std::norm(d)) * std::pow(k2 + 1.0, -1.0 - 0.5 * n);
  });
  return s / std::pow(2.0 * pi, n);
}

/// ||div v||_{H^{-1-n/2}} / ||v||_{H^{-n/2}}; zero for the zero field.
inline double divergence_residual(const VectorField& v) {
  const int n = v.dim();
  double num = 0.0, den = 0.0;
  num = detail::mode_sum(v.comp, v.grid, [n](const Point& k, double k2, const cplx* a) {
    if (k2 == 0.0) return 0.0;
    cplx d{};
    for (int j = 0; j < n; ++j) d += k[j] * a[j];
    return std::norm(d) * std::pow(k2, -1.0 - 0.5 * n);
  });
  den = detail::mode_sum(v.comp, v.grid, [n](const Point&, double k2, const cplx* a) {
    if (k2 == 0.0) return 0.0;
    double m2 = 0.0;
    for (int j = 0; j < n; ++j) m2 += std::norm(a[j]);
    return m2 * std::pow(k2, -0.5 * n);
  });
  return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

enum class Mollifier { gaussian, compact_bump };

namespace detail {

inline double compact_bump_profile(double r) { return r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0; }

}  // namespace detail

/// g_eps = g - eps^n eta(eps x) int g, with eta the unit-mass profile
/// (2 pi)^{-n/2} e^{-|x|^2/2} or a normalised compact bump. The discrete
/// profile is rescaled to unit discrete mass so the output sums to zero.
inline VectorField regularize_eps(const VectorField& g, double eps,
                                  Mollifier profile = Mollifier::gaussian) {
  require(eps > 0.0, "regularize_eps: eps must be positive");
  const Grid& G = g.grid;
  const double half = 0.5 * G.box_len;
  if (profile == Mollifier::gaussian) {
    if (std::exp(-0.5 * (eps * half) * (eps * half)) >= 1e-8)
      throw EpsilonTooSmallForBox("regularize_eps: Gaussian tail at the box edge exceeds 1e-8");
  } else if (1.0 / eps > half - G.spacing()) {
    throw EpsilonTooSmallForBox("regularize_eps: bump support exceeds the box");
  }
  const int n = G.dim;
  const std::vector<double> mass = integral(g);
  std::vector<double> eta(G.size());
  for (std::size_t i = 0; i < eta.size(); ++i) {
    const double r = eps * G.radius(i);
    eta[i] = profile == Mollifier::gaussian ? std::pow(2.0 * pi, -0.5 * n) * std::exp(-0.5 * r * r)
                                            : detail::compact_bump_profile(r);
    eta[i] *= std::pow(eps, n);
  }
  const double total = pairwise_sum(eta) * G.cell_volume();
  VectorField out = g;
  out.support_radius = unbounded_support;
  for (int j = 0; j < n; ++j)
    for (std::size_t i = 0; i < eta.size(); ++i) out.comp[j][i] -= mass[j] * eta[i] / total;
  return out;
}

/// Richardson-extrapolated free-space value of a functional of a compactly
/// supported field: evaluates on copies zero-padded into 2L and 4L boxes.
template <class Field, class F>
double free_space_value(const Field& f, F&& functional) {
  const double s2 = functional(embed(f, 2));
  const double s4 = functional(embed(f, 4));
  return (4.0 * s4 - s2) / 3.0;
}

/// Field-valued version: the operator result is restricted back to the
/// original box before extrapolation.
template <class Field, class Op>
std::vector<std::vector<double>> free_space_field(const Field& f, Op&& op) {
  auto run = [&](int factor) {
    const auto big = embed(f, factor);
    std::vector<std::vector<double>> parts = op(big);
    for (auto& p : parts) p = restrict_values(p, big.grid, f.grid);
    return parts;
  };
  auto a = run(2);
  const auto b = run(4);
  for (std::size_t c = 0; c < a.size(); ++c)
    for (std::size_t i = 0; i < a[c].size(); ++i) a[c][i] = (4.0 * b[c][i] - a[c][i]) / 3.0;
  return a;
}

}  // namespace potlab::spectral
