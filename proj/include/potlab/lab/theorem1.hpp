#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "potlab/kernels.hpp"
#include "potlab/lab/report.hpp"
#include "potlab/recipe.hpp"
#include "potlab/sphere.hpp"
#include "potlab/weighted.hpp"

namespace potlab::lab {

/// Least-squares fit y = c0 + c1 x.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "fit_line needs two or more points");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

inline bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

namespace detail {

inline void check_degree(const HomogeneousIntegrand& phi, double q) {
  if (std::abs(phi.degree - q) > 1e-12)
    throw InvalidArgument("integrand degree " + std::to_string(phi.degree) + " does not match q");
}

/// max over the radius ladder of |int_{|x|<R} Phi(grad u) |x|^{n(q-1)-q} dx|.
inline double sup_truncated(const ScalarField& f, const HomogeneousIntegrand& phi, double q, bool probe,
                            double* argmax = nullptr) {
  const auto radii = radius_ladder(f.grid);
  const auto vals = truncated_phi_integrals(potential_gradient(f), phi, q, radii, probe);
  double best = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (std::abs(vals[i]) > best) {
      best = std::abs(vals[i]);
      if (argmax) *argmax = radii[i];
    }
  return best;
}

/// Mollified point-mass pair delta_0 - delta_b of width rho (unit masses, compact bumps).
inline ScalarField delta_pair(const Grid& g, double rho, const Point& b) {
  FieldRecipe r;
  r.kind = RecipeKind::dipole_pair;
  r.params = {{"px", 0.0}, {"py", 0.0}, {"pz", 0.0}, {"mx", b[0]},  {"my", b[1]},
              {"mz", b[2]}, {"width", rho}, {"compact", 1.0}, {"unit_mass", 1.0}};
  return generate_scalar(r, g);
}

inline void check_ladder(const std::vector<double>& rho) {
  if (rho.size() < 3) throw InvalidArgument("a ladder of at least three mollifier widths is required");
  for (std::size_t i = 1; i < rho.size(); ++i)
    if (!(rho[i] < rho[i - 1])) throw InvalidArgument("mollifier widths must be strictly decreasing");
}

inline std::vector<double> ladder_ratios(const Grid& g, const HomogeneousIntegrand& phi, double q,
                                         const std::vector<double>& rho, const Point& b, bool probe) {
  std::vector<double> out;
  for (double r : rho) {
    const ScalarField f = delta_pair(g, r, b);
    out.push_back(sup_truncated(f, phi, q, probe) / std::pow(l1_norm(f), q));
  }
  return out;
}

inline std::vector<double> log_inverse(const std::vector<double>& rho) {
  std::vector<double> x;
  for (double r : rho) x.push_back(std::log(1.0 / r));
  return x;
}

}  // namespace detail

/// sup_R |int_{|x|<R} Phi(grad u) |x|^{n(q-1)-q} dx| against (int |f|)^q.
inline InequalityReport theorem1_check(const ScalarField& f, const HomogeneousIntegrand& phi, double q,
                                       bool probe = false) {
  const Grid& g = f.grid;
  check_q(g.dim, q, probe);
  detail::check_degree(phi, q);
  spectral::detail::require_mean_zero(f.values, "theorem1_check");
  const auto quad = make_sphere_quadrature(g.dim);
  const double mean = phi.exact_sphere_integral(g.dim);
  const double scale = quad.integrate([&](const Point& w) { return std::abs(phi(w, g.dim)); });
  if (std::abs(mean) > 1e-12 * std::max(scale, 1.0))
    throw SphereMeanNonzero("integrand has nonzero sphere mean; use the necessity probe");
  InequalityReport r = make_report("T1", g, q);
  double argmax = 0.0;
  r.lhs = detail::sup_truncated(f, phi, q, probe, &argmax);
  r.rhs = std::pow(l1_norm(f), q);
  r.details["sphere_integral"] = mean;
  r.details["sphere_integral_quadrature"] = phi.sphere_integral(quad);
  r.details["argmax_radius"] = argmax;
  finish_ratio(r);
  return r;
}

/// Ratios for delta pairs of shrinking width rho with an integrand of nonzero
/// sphere mean; a zero-mean control integrand runs on the same ladder.
inline InequalityReport theorem1_necessity_probe(const Grid& g, const HomogeneousIntegrand& active,
                                                 const HomogeneousIntegrand& control, double q,
                                                 const std::vector<double>& rho, const Point& b,
                                                 bool probe = false) {
  detail::check_ladder(rho);
  check_q(g.dim, q, probe);
  detail::check_degree(active, q);
  detail::check_degree(control, q);
  const auto quad = make_sphere_quadrature(g.dim);
  InequalityReport r = make_report("T1_necessity", g, q);
  const auto act = detail::ladder_ratios(g, active, q, rho, b, probe);
  const auto ctl = detail::ladder_ratios(g, control, q, rho, b, probe);
  const auto x = detail::log_inverse(rho);
  const LineFit fa = fit_line(x, act);
  const LineFit fc = fit_line(x, ctl);
  const auto [cmin, cmax] = std::minmax_element(ctl.begin(), ctl.end());
  const double spread = *cmin > 0 ? *cmax / *cmin : std::numeric_limits<double>::infinity();
  r.lhs = act.back();
  r.rhs = act.front();
  r.ratio = act.back() / act.front();
  r.details["rho"] = rho;
  r.details["active_ratios"] = act;
  r.details["control_ratios"] = ctl;
  r.details["active_sphere_integral"] = active.exact_sphere_integral(g.dim);
  r.details["control_sphere_integral"] = control.exact_sphere_integral(g.dim);
  r.details["fit"] = {{"intercept", fa.intercept}, {"slope", fa.slope}, {"r2", fa.r2}};
  r.details["control_fit"] = {{"intercept", fc.intercept}, {"slope", fc.slope}, {"r2", fc.r2}};
  r.details["control_spread"] = spread;
  r.expect(strictly_increasing(act), "active ratios are not strictly increasing");
  r.expect(fa.r2 > 0.95, "log fit R^2 = " + std::to_string(fa.r2) + " is not above 0.95");
  r.expect(spread <= 1.5 && std::abs(fc.slope) < 0.1 * std::abs(fa.slope), "control arm is not bounded");
  return r;
}

/// Critical-exponent probe for n = 2 quadratic integrands: a trace-zero and a
/// trace-nonzero arm on a shrinking delta-pair ladder, reported without a gate.
inline InequalityReport conjecture_probe(const Grid& g, const std::vector<double>& trace_zero,
                                         const std::vector<double>& trace_nonzero, const std::vector<double>& rho,
                                         const Point& b) {
  require(g.dim == 2, "conjecture probe is two-dimensional");
  require(trace_zero.size() == 4 && trace_nonzero.size() == 4, "quadratic forms need four coefficients");
  detail::check_ladder(rho);
  const double q = critical_exponent(2);
  InequalityReport r = make_report("CONJ_PROBE", g, q);
  r.gated = false;
  const auto zero = detail::ladder_ratios(g, quadratic_form(trace_zero), q, rho, b, true);
  const auto nonzero = detail::ladder_ratios(g, quadratic_form(trace_nonzero), q, rho, b, true);
  const double q_sub = 0.95 * q;
  const auto sub = detail::ladder_ratios(g, abs_power_combo({1.0, -1.0}, q_sub), q_sub, rho, b, false);
  const auto x = detail::log_inverse(rho);
  const LineFit fz = fit_line(x, zero), fn = fit_line(x, nonzero), fs = fit_line(x, sub);
  r.lhs = nonzero.back();
  r.rhs = nonzero.front();
  r.ratio = nonzero.back() / nonzero.front();
  r.details["rho"] = rho;
  r.details["trace_zero_ratios"] = zero;
  r.details["trace_nonzero_ratios"] = nonzero;
  r.details["subcritical_ratios"] = sub;
  r.details["trace_zero_slope"] = fz.slope;
  r.details["trace_nonzero_slope"] = fn.slope;
  r.details["subcritical_slope"] = fs.slope;
  return r;
}

}  // namespace potlab::lab
