#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

using namespace potlab;
using namespace testutil;
namespace sp = potlab::spectral;

namespace {

double plancherel_gap(const ScalarField& f) {
  const auto s = sp::dft(f);
  const double dxi = 2.0 * pi / f.grid.box_len;
  double lhs = 0.0, rhs = 0.0;
  for (double v : f.values) lhs += v * v;
  lhs *= f.grid.cell_volume();
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) rhs += std::norm(s.coeffs[i]);
  rhs *= std::pow(dxi, f.grid.dim) / std::pow(2.0 * pi, f.grid.dim);
  return std::abs(lhs - rhs) / lhs;
}

}  // namespace

TEST(Fft, ForwardBackwardScalesBySize) {
  const Grid g = make_grid(2, 1.0, 16);
  sp::ComplexBuffer b(g.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = sp::cplx(std::sin(0.3 * i), std::cos(0.7 * i));
  const sp::ComplexBuffer orig = b;
  sp::fft_inplace(b, g, -1);
  sp::fft_inplace(b, g, +1);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(std::abs(b[i] / double(g.size()) - orig[i]), 0.0, 1e-13);
}

TEST(Dft, GaussianMatchesClosedForm) {
  const Grid g = make_grid(2, 16.0, 64);
  const ScalarField f = scaled(gaussian(g, {0, 0, 0}, 1.0), 2.0 * pi);
  const auto s = sp::dft(f);
  const double cap = 0.5 * pi / g.spacing();
  int checked = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point xi = s.frequency(i);
    const double k2 = xi[0] * xi[0] + xi[1] * xi[1];
    if (k2 > cap * cap) continue;
    const double expect = 2.0 * pi * std::exp(-0.5 * k2);
    EXPECT_LT(std::abs(s.coeffs[i] - sp::cplx(expect)) / expect, 1e-3) << i;
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Dft, SingleCellHasFlatModulus) {
  const Grid g = make_grid(3, 2.0, 8);
  ScalarField f(g);
  f.values[g.flat({3, 5, 1})] = 1.0;
  const auto s = sp::dft(f);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(s.coeffs[i]), g.cell_volume(), 1e-14);
}

TEST(Dft, RoundTrip) {
  for (int n : {2, 3}) {
    const Grid g = make_grid(n, 8.0, n == 2 ? 64 : 24);
    const ScalarField f = generate_scalar(bumps(5, false, false), g);
    const ScalarField back = sp::idft(sp::dft(f));
    EXPECT_LT(max_abs_diff(back.values, f.values), 1e-12 * max_abs(f.values));
  }
}

TEST(Dft, PlancherelOnRandomFields) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    for (int n : {2, 3}) {
      const Grid g = make_grid(n, 8.0, n == 2 ? 48 : 16);
      EXPECT_LT(plancherel_gap(generate_scalar(bumps(seed, false, false), g)), 1e-10);
    }
}

TEST(Dft, WavenumberBookkeeping) {
  const Grid g = make_grid(2, 1.0, 8);
  const auto s = sp::dft(ScalarField(g));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(s.flat_of(s.wavenumber(i)), i);
  EXPECT_EQ(s.wavenumber(g.flat({4, 7}))[0], -4);
  EXPECT_EQ(s.wavenumber(g.flat({4, 7}))[1], -1);
}

TEST(Sobolev, GaussianL0NormMatchesClosedForm) {
  const Grid g = make_grid(2, 16.0, 64);
  const ScalarField f = scaled(gaussian(g, {0, 0, 0}, 1.0), 2.0 * pi);
  const double v = sp::sobolev_norm_homog(f, 0.0);
  EXPECT_LT(std::abs(v * v - 4.0 * pi * pi * pi) / (4.0 * pi * pi * pi), 1e-2);
}

TEST(Sobolev, InhomogeneousAtZeroEqualsHomogeneous) {
  const Grid g = make_grid(2, 8.0, 32);
  const ScalarField f = generate_scalar(bumps(3, false, false), g);
  EXPECT_NEAR(sp::sobolev_norm_inhomog(f, 0.0), sp::sobolev_norm_homog(f, 0.0),
              1e-12 * sp::sobolev_norm_homog(f, 0.0));
}

TEST(Sobolev, InhomogeneousGaussianAgainstRadialQuadrature) {
  // (2 pi)^2 int_0^inf (r^2 + 1)^{-1/2} e^{-r^2} 2 pi r dr
  const double oracle = std::pow(2.0 * pi, 3) * 0.5 * std::sqrt(pi) * std::exp(1.0) * std::erfc(1.0);
  for (int N : {64, 128}) {
    const Grid g = make_grid(2, 16.0, N);
    const ScalarField f = scaled(gaussian(g, {0, 0, 0}, 1.0), 2.0 * pi);
    const double v = sp::sobolev_norm_inhomog(f, -1.0);
    EXPECT_LT(std::abs(v * v - oracle) / oracle, 2e-2) << N;
  }
}

TEST(Sobolev, ZeroFieldAndNegativeOrderStability) {
  const Grid g = make_grid(2, 8.0, 32);
  EXPECT_EQ(sp::sobolev_norm_homog(ScalarField(g), -1.0), 0.0);
  const double a = sp::sobolev_norm_homog(dipole(make_grid(2, 8.0, 64), {0.5, 0, 0}, 0.3), -1.0);
  const double b = sp::sobolev_norm_homog(dipole(make_grid(2, 8.0, 128), {0.5, 0, 0}, 0.3), -1.0);
  EXPECT_GT(a, 0.0);
  EXPECT_LT(std::abs(a - b) / b, 3e-2);
}

TEST(Sobolev, NegativeOrderNeedsMeanZero) {
  const Grid g = make_grid(2, 8.0, 32);
  EXPECT_THROW(sp::sobolev_norm_homog(gaussian(g, {0, 0, 0}, 0.5), -1.0), MeanNotZero);
  EXPECT_THROW(sp::frac_laplacian_power(gaussian(g, {0, 0, 0}, 0.5), -2.0), MeanNotZero);
}

TEST(FracLaplacian, IdentityAndSingleMode) {
  const double L = 3.0;
  const Grid g = make_grid(2, L, 32);
  ScalarField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = std::sin(2.0 * pi * g.point(i)[0] / L);
  const ScalarField same = sp::frac_laplacian_power(f, 0.0);
  EXPECT_LT(max_abs_diff(same.values, f.values), 1e-12);
  const ScalarField inv = sp::frac_laplacian_power(f, -2.0);
  const double k = 2.0 * pi / L;
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(inv.values[i], f.values[i] / (k * k), 1e-12);
}

TEST(FracLaplacian, Composition) {
  for (int n : {2, 3}) {
    const Grid g = make_grid(n, 8.0, n == 2 ? 48 : 16);
    const ScalarField f = dipole(g, {0.6, 0.2, 0.1}, 0.5);
    for (auto [a, b] : {std::pair{-1.0, -0.5}, std::pair{1.5, -3.0}, std::pair{-2.0, 3.0}}) {
      const ScalarField lhs = sp::frac_laplacian_power(sp::frac_laplacian_power(f, a), b);
      const ScalarField rhs = sp::frac_laplacian_power(f, a + b);
      EXPECT_LT(max_abs_diff(lhs.values, rhs.values), 1e-10 * std::max(1.0, max_abs(rhs.values)));
    }
  }
}

TEST(Spectral, DivergenceOfGradientIsMinusLaplacian) {
  const Grid g = make_grid(2, 8.0, 48);
  const ScalarField u = generate_scalar(bumps(9, false, false), g);
  const ScalarField lhs = sp::divergence(sp::gradient(u));
  const ScalarField rhs = sp::frac_laplacian_power(u, 2.0);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(lhs.values[i], -rhs.values[i], 1e-9 * max_abs(rhs.values));
}

TEST(Spectral, CorollaryNormIdentity) {
  for (int n : {2, 3}) {
    const Grid g = make_grid(n, 8.0, n == 2 ? 64 : 24);
    const ScalarField u = dipole(g, {0.7, -0.3, 0.2}, 0.5);
    const double a = sp::sobolev_norm_homog(sp::gradient(u), -0.5 * n);
    const double b = sp::sobolev_norm_homog(u, 1.0 - 0.5 * n);
    EXPECT_LT(std::abs(a - b) / b, 1e-10) << n;
  }
}

TEST(Leray, AnnihilatesGradients) {
  const Grid g = make_grid(2, 8.0, 48);
  const VectorField grad = sp::gradient(generate_scalar(bumps(4, false, false), g));
  const VectorField p = sp::leray_project(grad);
  EXPECT_LT(max_abs(pointwise_norm(p)), 1e-10 * max_abs(pointwise_norm(grad)));
}

TEST(Leray, IdempotentSelfAdjointAndDivergenceFree) {
  for (int n : {2, 3}) {
    const Grid g = make_grid(n, 8.0, n == 2 ? 48 : 16);
    const VectorField a = generate_vector(bumps(11, true), g);
    const VectorField b = generate_vector(bumps(12, true), g);
    const VectorField pa = sp::leray_project(a);
    const VectorField ppa = sp::leray_project(pa);
    const double scale = max_abs(pointwise_norm(pa));
    for (int j = 0; j < n; ++j) EXPECT_LT(max_abs_diff(ppa.comp[j], pa.comp[j]), 1e-10 * scale);
    const VectorField pb = sp::leray_project(b);
    const double s1 = dot(pa, b), s2 = dot(a, pb);
    EXPECT_LT(std::abs(s1 - s2), 1e-10 * (std::abs(s1) + std::sqrt(dot(a, a) * dot(b, b))));
    EXPECT_LT(sp::divergence_residual(pa), 1e-10);
  }
}

TEST(Riesz, SingleModeCoefficient) {
  const double L = 4.0;
  const Grid g = make_grid(2, L, 16);
  ScalarField f(g);
  // cos(k x1) has transform halves at +-k; its Riesz transform is sin(k x1) e_1.
  const double k = 2.0 * pi * 2 / L;
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = std::cos(k * g.point(i)[0]);
  const VectorField r = sp::riesz_transform(f);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(r.comp[0][i], std::sin(k * g.point(i)[0]), 1e-12);
    EXPECT_NEAR(r.comp[1][i], 0.0, 1e-12);
  }
}

TEST(Riesz, RadialInputGivesRadialDirection) {
  const Grid g = make_grid(2, 16.0, 128);
  ScalarField f = gaussian(g, {0, 0, 0}, 0.6);
  const ScalarField wide = gaussian(g, {0, 0, 0}, 1.2);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] -= wide.values[i];
  const VectorField r = sp::riesz_transform(f);
  const double peak = max_abs(pointwise_norm(r));
  int checked = 0;
  for (std::size_t i = 0; i < g.size(); i += 17) {
    const Point x = g.point(i);
    const double rx = g.radius(i);
    const double mag = std::hypot(r.comp[0][i], r.comp[1][i]);
    if (rx > 4.0 || mag < 0.1 * peak) continue;
    const double cross = std::abs(r.comp[0][i] * x[1] - r.comp[1][i] * x[0]) / (mag * rx);
    EXPECT_LT(cross, 0.02) << i;
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(Regularize, MeanZeroInputUnchanged) {
  const Grid g = make_grid(2, 16.0, 64);
  const VectorField v = generate_vector(bumps(2, true), g);
  const VectorField out = sp::regularize_eps(v, 1.0);
  for (int j = 0; j < 2; ++j) EXPECT_LT(max_abs_diff(out.comp[j], v.comp[j]), 1e-12 * max_abs(v.comp[j]) + 1e-15);
}

TEST(Regularize, CorrectionIsScaledGaussian) {
  const Grid g = make_grid(2, 16.0, 64);
  VectorField v(g);
  v.comp[0] = gaussian(g, {0.5, 0.0, 0.0}, 0.4).values;
  const VectorField out = sp::regularize_eps(v, 1.0);
  const auto mass = integral(out);
  EXPECT_LT(std::abs(mass[0]), 1e-6);
  for (std::size_t i = 0; i < g.size(); i += 101) {
    const double r2 = g.radius(i) * g.radius(i);
    EXPECT_NEAR(v.comp[0][i] - out.comp[0][i], std::exp(-0.5 * r2) / (2.0 * pi), 1e-6);
  }
}

TEST(Regularize, RejectsTinyEpsilon) {
  const Grid g = make_grid(2, 8.0, 32);
  VectorField v(g);
  v.comp[0] = gaussian(g, {0, 0, 0}, 0.4).values;
  EXPECT_THROW(sp::regularize_eps(v, 0.5), EpsilonTooSmallForBox);
  EXPECT_THROW(sp::regularize_eps(v, 0.2, sp::Mollifier::compact_bump), EpsilonTooSmallForBox);
  EXPECT_NO_THROW(sp::regularize_eps(v, 2.0, sp::Mollifier::compact_bump));
}

TEST(FreeSpace, ExtrapolationIsExactForIntegrals) {
  const Grid g = make_grid(2, 4.0, 16);
  const ScalarField f = gaussian(g, {0.2, 0.1, 0}, 0.3);
  const double v = sp::free_space_value(f, [](const ScalarField& e) { return integral(e); });
  EXPECT_NEAR(v, integral(f), 1e-12);
}
