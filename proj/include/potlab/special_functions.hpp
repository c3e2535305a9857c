#pragma once

#include <array>
#include <cmath>
#include <string>

#include "potlab/common.hpp"

namespace potlab {

/// Gamma function for real z > 0 (Lanczos, g = 7, nine terms; reflection below 1/2).
inline double gamma_fn(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("gamma_fn: argument must be positive");
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z < 0.5) return pi / (std::sin(pi * z) * gamma_fn(1.0 - z));
  const double x = z - 1.0;
  double a = c[0];
  for (int i = 1; i < 9; ++i) a += c[i] / (x + i);
  const double t = x + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

namespace detail {

// Ascending series, t <= 2.
inline double bessel_k1_series(double t) {
  constexpr double euler_gamma = 0.57721566490153286061;
  const double y = 0.25 * t * t;
  double term = 1.0;  // y^k / (k! (k+1)!)
  double i1 = 0.0, tail = 0.0;
  double psi1 = -euler_gamma;        // psi(k+1)
  double psi2 = 1.0 - euler_gamma;   // psi(k+2)
  for (int k = 0; k < 60; ++k) {
    i1 += term;
    tail += (psi1 + psi2) * term;
    if (term < 1e-18 * i1) break;
    psi1 += 1.0 / (k + 1);
    psi2 += 1.0 / (k + 2);
    term *= y / ((k + 1.0) * (k + 2.0));
  }
  i1 *= 0.5 * t;
  return 1.0 / t + i1 * std::log(0.5 * t) - 0.25 * t * tail;
}

// Steed's continued fraction (CF2) for K_0 and K_1, t > 2.
inline double bessel_k1_cf2(double x) {
  constexpr double a1 = 0.25;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 10000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 1e-17) break;
  }
  h *= a1;
  const double k0 = std::sqrt(pi / (2.0 * x)) * std::exp(-x) / s;
  return k0 * (x + 0.5 - h) / x;
}

}  // namespace detail

/// Modified Bessel function of the second kind, order one, for t > 0.
inline double bessel_k1(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("bessel_k1: argument must be positive");
  return t <= 2.0 ? detail::bessel_k1_series(t) : detail::bessel_k1_cf2(t);
}

enum class PaperConstant { thm3i_const, thm3iii_const, corollary_const, thm4_const, cr_scale, sphere_area };

inline PaperConstant parse_paper_constant(const std::string& s) {
  if (s == "thm3i_const") return PaperConstant::thm3i_const;
  if (s == "thm3iii_const") return PaperConstant::thm3iii_const;
  if (s == "corollary_const") return PaperConstant::corollary_const;
  if (s == "thm4_const") return PaperConstant::thm4_const;
  if (s == "cr_scale") return PaperConstant::cr_scale;
  if (s == "sphere_area") return PaperConstant::sphere_area;
  throw InvalidArgument("unknown constant '" + s + "'");
}

/// Named constants of the inequalities. thm4_const is the three-dimensional
/// value 1/(4 pi^2) and ignores n.
inline double paper_constant(PaperConstant name, int n) {
  if (n != 2 && n != 3) throw InvalidArgument("paper_constant: n must be 2 or 3");
  const double two_sqrt_pi = std::pow(2.0 * std::sqrt(pi), -n);
  switch (name) {
    case PaperConstant::sphere_area:
      return 2.0 * std::pow(pi, 0.5 * n) / gamma_fn(0.5 * n);
    case PaperConstant::thm3i_const:
      return (n - 1) * two_sqrt_pi / gamma_fn(1.0 + 0.5 * n);
    case PaperConstant::thm3iii_const:
      return two_sqrt_pi / gamma_fn(0.5 * n);
    case PaperConstant::corollary_const:
      return std::sqrt(two_sqrt_pi / (gamma_fn(0.5 * n) * (n - 1)));
    case PaperConstant::thm4_const:
      return 1.0 / (4.0 * pi * pi);
    case PaperConstant::cr_scale:
      return std::pow(2.0, 1 - n) * std::pow(pi, -0.5 * n) / gamma_fn(0.5 * n);
  }
  return 0.0;
}

inline double sphere_area(int n) { return paper_constant(PaperConstant::sphere_area, n); }

}  // namespace potlab
