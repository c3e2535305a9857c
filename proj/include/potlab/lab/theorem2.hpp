#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "potlab/flux.hpp"
#include "potlab/lab/report.hpp"
#include "potlab/weighted.hpp"

namespace potlab::lab {

inline constexpr double divfree_tol = 1e-10;
inline constexpr double div_curl_tol = 1e-8;

namespace detail {

inline void require_divergence_free(const VectorField& f) {
  const double res = spectral::divergence_residual(f);
  if (res > divfree_tol)
    throw NotDivergenceFree("divergence residual " + std::to_string(res) + " exceeds 1e-10");
}

/// D u with u = (-Delta)^{-1} f on the periodic box.
inline MatrixField velocity_jacobian(const VectorField& f) {
  return spectral::jacobian(spectral::frac_laplacian_power(f, -2.0));
}

inline double max_abs(const std::vector<std::vector<double>>& parts) {
  double m = 0.0;
  for (const auto& p : parts)
    for (double x : p) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

/// ||D u||_{L^q(|x|^{n(q-1)-q})} against ||f||_{L^1} for divergence-free f.
inline InequalityReport theorem2_check(const VectorField& f, double q, bool probe = false) {
  check_q(f.dim(), q, probe);
  detail::require_divergence_free(f);
  InequalityReport r = make_report("T2", f.grid, q);
  r.details["divergence_residual"] = spectral::divergence_residual(f);
  r.lhs = weighted_lq_norm(detail::velocity_jacobian(f), q, probe);
  r.rhs = l1_norm(f);
  finish_ratio(r);
  return r;
}

/// Skew F = curl (-Delta)^{-1} f: weighted norm of F against ||Div F||_{L^1}.
inline InequalityReport lemma10x_check(const VectorField& f, double q, bool probe = false) {
  check_q(f.dim(), q, probe);
  detail::require_divergence_free(f);
  InequalityReport r = make_report("LEMMA_10x", f.grid, q);
  const MatrixField F = curl_inverse_laplacian(f);
  const int n = f.dim();
  double skew = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (std::size_t c = 0; c < f.grid.size(); ++c)
        skew = std::max(skew, std::abs(F.entry(i, j)[c] + F.entry(j, i)[c]));
  r.details["skew_defect"] = skew;
  r.expect(skew == 0.0, "curl matrix is not skew-symmetric");
  const VectorField divF = row_divergence(F);
  const double fmax = detail::max_abs(f.comp);
  std::vector<std::vector<double>> diff = divF.comp;
  for (int j = 0; j < n; ++j)
    for (std::size_t c = 0; c < diff[j].size(); ++c) diff[j][c] -= f.comp[j][c];
  const double rel = fmax > 0 ? detail::max_abs(diff) / fmax : detail::max_abs(diff);
  r.details["div_curl_residual"] = rel;
  r.expect(rel <= div_curl_tol, "Div F differs from f by " + std::to_string(rel));
  r.lhs = weighted_lq_norm(F, q, probe);
  r.rhs = l1_norm(divF);
  finish_ratio(r);
  if (r.degenerate) r.gated = false;
  return r;
}

/// q in (1, n/(n-1)): ||D u|| against ||f||_{L^1} + ||grad (-Delta)^{-1} div f||_{L^1}.
inline InequalityReport prop1_check(const VectorField& f, double q) {
  if (!(q > 1.0)) throw QOutOfRange("this estimate needs q > 1");
  check_q(f.dim(), q, false);
  spectral::detail::require_mean_zero(f, "prop1_check");
  InequalityReport r = make_report("P1", f.grid, q);
  const ScalarField h = spectral::divergence(f);
  const double t1 = l1_norm(f);
  const double t2 = l1_norm(spectral::gradient_inverse_laplacian(h));
  r.lhs = weighted_lq_norm(detail::velocity_jacobian(f), q);
  r.rhs = t1 + t2;
  r.details["f_l1"] = t1;
  r.details["div_term_l1"] = t2;
  finish_ratio(r);
  return r;
}

/// q = 1: the divergence enters through the Hardy seminorm
/// ||(-Delta)^{-1/2} h||_{L^1} + ||grad (-Delta)^{-1} h||_{L^1}, h = div f.
inline InequalityReport prop2_check(const VectorField& f) {
  spectral::detail::require_mean_zero(f, "prop2_check");
  InequalityReport r = make_report("P2", f.grid, 1.0);
  const ScalarField h = spectral::divergence(f);
  const double t1 = l1_norm(f);
  const double phi = l1_norm(spectral::frac_laplacian_power(h, -1.0));
  const double riesz = l1_norm(spectral::gradient_inverse_laplacian(h));
  r.lhs = weighted_lq_norm(detail::velocity_jacobian(f), 1.0);
  r.rhs = t1 + phi + riesz;
  r.details["f_l1"] = t1;
  r.details["hardy_phi_l1"] = phi;
  r.details["hardy_riesz_l1"] = riesz;
  finish_ratio(r);
  return r;
}

/// Flux recursion for F = curl (-Delta)^{-1} f at radius r. The columns form
/// one vector identity; the residual is max_j |lhs_j - rhs_j| / max_j |rhs_j|.
inline InequalityReport flux_recursion_check(const VectorField& f, double radius) {
  detail::require_divergence_free(f);
  InequalityReport r = make_report("FLUX_RECURSION", f.grid);
  r.q_or_l = radius;
  const MatrixField F = curl_inverse_laplacian(f);
  const VectorField divF = row_divergence(F);
  const auto quad = make_sphere_quadrature(f.dim());
  const double factor = std::pow(2.0, f.dim() - 1) * (f.dim() - 1.0) / f.dim();
  nlohmann::json arr = nlohmann::json::array();
  double big = 0.0, err = 0.0, green = 0.0;
  for (int j = 0; j < f.dim(); ++j) {
    const FluxRecursion c = flux_recursion(F, divF, j, radius, quad);
    arr.push_back({{"column", j}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"green_flux", c.green_flux}});
    if (std::abs(c.rhs) > big) {
      big = std::abs(c.rhs);
      r.lhs = c.lhs;
      r.rhs = c.rhs;
    }
    err = std::max(err, std::abs(c.lhs - c.rhs));
    green = std::max(green, std::abs(c.green_flux - c.rhs / factor));
  }
  r.details["columns"] = arr;
  r.degenerate = big == 0.0;
  r.ratio = r.degenerate ? nan : r.lhs / r.rhs;
  const double rel = r.degenerate ? 0.0 : err / big;
  r.details["relative_difference"] = rel;
  r.details["green_relative_difference"] = r.degenerate ? 0.0 : green * factor / big;
  r.expect(rel < identity_tol, "flux recursion differs by " + std::to_string(rel));
  if (r.degenerate) r.gated = false;
  return r;
}

}  // namespace potlab::lab
