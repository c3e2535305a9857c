#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

using namespace potlab;
using namespace potlab::lab;
using namespace testutil;

namespace {

Grid grid_for(int n) { return make_grid(n, 8.0, n == 2 ? 64 : 24); }

VectorField mean_zero_field(int n, std::uint64_t seed) { return generate_vector(bumps(seed, true), grid_for(n)); }

ScalarField mean_zero_scalar(int n, std::uint64_t seed) { return generate_scalar(bumps(seed, false), grid_for(n)); }

std::vector<double> doubles(const nlohmann::json& j) { return j.get<std::vector<double>>(); }

// Two opposite Gaussian dipoles along different axes, at length scale s with
// fixed mass.
VectorField two_dipoles(const Grid& g, double s) {
  VectorField v(g);
  v.comp[0] = dipole(g, {0.8 * s, 0.3 * s, 0.0}, 0.3 * s).values;
  v.comp[1] = dipole(g, {-0.2 * s, 0.7 * s, 0.0}, 0.25 * s).values;
  return v;
}

}  // namespace

TEST(Theorem3Identity, SpectralFormMatchesKernelForm) {
  for (int n : {2, 3})
    for (std::uint64_t s = 1; s <= 3; ++s) {
      const auto rep = theorem3_identity_check(mean_zero_field(n, s));
      EXPECT_TRUE(rep.passed) << "n=" << n << " seed=" << s;
      EXPECT_LE(rep.details["path_difference"].get<double>(), 1e-8);
    }
}

TEST(Theorem3Identity, DivergenceFreeFieldReducesToNegativeNorm) {
  FieldRecipe r;
  r.kind = RecipeKind::divfree_projected;
  r.params = {{"count", 3}};
  r.seed = 4;
  const VectorField g = generate_vector(r, grid_for(2));
  const double form = spectral::negative_order_form(g, 2.0);
  const double norm = spectral::sobolev_norm_homog(g, -1.0);
  EXPECT_NEAR(form, std::pow(2.0 * pi, -2) * norm * norm, 1e-10 * std::abs(form));
  EXPECT_TRUE(theorem3_identity_check(g).passed);
}

TEST(Theorem3Identity, ZeroFieldIsDegenerate) {
  const auto rep = theorem3_identity_check(VectorField(grid_for(2)));
  EXPECT_TRUE(rep.degenerate);
  EXPECT_FALSE(rep.gated);
}

TEST(Theorem3iii, BoundHoldsOnRandomFields) {
  for (int n : {2, 3})
    for (std::uint64_t s = 10; s < 14; ++s) {
      const auto rep = theorem3iii_check(mean_zero_field(n, s));
      EXPECT_TRUE(rep.passed) << "n=" << n << " seed=" << s;
      EXPECT_LE(rep.ratio, 1.02);
      EXPECT_GT(rep.ratio, 0.0);
    }
}

TEST(Theorem3iii, ConstantInThreeDimensions) {
  const auto rep = theorem3iii_check(mean_zero_field(3, 1));
  EXPECT_NEAR(rep.constant, 1.0 / (4.0 * pi * pi), 1e-12);
}

TEST(Theorem3iii, HomogeneousOfDegreeZeroAndDilationInvariant) {
  const Grid g = make_grid(2, 8.0, 128);
  const VectorField a = two_dipoles(g, 1.0);
  const double base = theorem3iii_check(a).ratio;
  EXPECT_NEAR(theorem3iii_check(scaled(a, -4.0)).ratio, base, 1e-10 * base);
  EXPECT_NEAR(theorem3iii_check(two_dipoles(g, 0.6)).ratio, base, 0.05 * base);
}

TEST(Theorem3iii, GradientFieldMatchesCorollarySquared) {
  for (int n : {2, 3}) {
    const ScalarField u = mean_zero_scalar(n, 5);
    const double t3 = theorem3iii_check(spectral::gradient(u)).ratio;
    const double c = corollary_check(u).ratio;
    EXPECT_NEAR(t3, c * c, 1e-5 * t3) << "n=" << n;
  }
}

TEST(Theorem3iii, RejectsNonzeroMean) {
  EXPECT_THROW(theorem3iii_check(generate_vector(bumps(3, true, false), grid_for(2))), MeanNotZero);
}

TEST(Theorem3i, LimitMatchesKernelSideForNonzeroMass) {
  const VectorField g = generate_vector(bumps(6, true, false), grid_for(2));
  const auto rep = theorem3i_limit_check(g);
  EXPECT_TRUE(rep.passed) << testing::PrintToString(rep.failures);
  EXPECT_LE(rep.ratio, 1.02);
  EXPECT_LT(rep.details["kernel_relative_difference"].get<double>(), 0.02);
  for (double s : doubles(rep.details["shrink_factors"])) EXPECT_GE(s, 2.0);
}

TEST(Theorem3i, MeanZeroFieldNeedsNoRegularization) {
  const VectorField g = mean_zero_field(2, 8);
  const auto rep = theorem3i_limit_check(g);
  const auto vals = doubles(rep.details["values"]);
  const double exact = lab::detail::free_form(g, 2.0);
  for (double v : vals) EXPECT_NEAR(v, exact, 1e-3 * std::abs(exact));
}

TEST(Theorem3i, LadderValidation) {
  const VectorField g = mean_zero_field(2, 8);
  EXPECT_THROW(theorem3i_limit_check(g, {4, 2}), InvalidArgument);
  EXPECT_THROW(theorem3i_limit_check(g, {2, 4, 8}), InvalidArgument);
  EXPECT_THROW(theorem3i_limit_check(g, {2, 1, 0.5}), EpsilonTooSmallForBox);
}

TEST(Theorem3ii, ExtremizerApproachesConstantFromBelow) {
  const auto rep = theorem3ii_sharpness(make_grid(2, 8.0, 128), {0.8, 0.4, 0.2, 0.1, 0.05, 0.025}, 0.1, 1.9);
  EXPECT_TRUE(rep.passed) << testing::PrintToString(rep.failures);
  const auto fr = doubles(rep.details["fractions"]);
  for (std::size_t i = 1; i < fr.size(); ++i) EXPECT_GT(fr[i], fr[i - 1]);
  EXPECT_GE(fr.back(), 0.85);
  EXPECT_LE(fr.back(), 1.02);
}

TEST(Theorem3ii, WideConeStaysWellBelowConstant) {
  const auto rep = theorem3ii_sharpness(make_grid(2, 8.0, 64), {1.2, 0.8, 0.6}, 0.1, 1.9);
  EXPECT_FALSE(rep.passed);
  EXPECT_LT(rep.ratio, 0.85);
  for (double f : doubles(rep.details["fractions"])) EXPECT_LE(f, 1.02);
}

TEST(Theorem3ii, CoefficientForcing) {
  const Grid g = make_grid(2, 8.0, 128);
  const std::vector<double> sigma = {0.4, 0.2, 0.1};
  const auto bounded = c1_forcing_probe(g, sigma, 2.0);
  EXPECT_TRUE(bounded.passed) << testing::PrintToString(bounded.failures);
  for (double c1 : {0.0, 1.0}) {
    const auto rep = c1_forcing_probe(g, sigma, c1);
    EXPECT_TRUE(rep.passed) << "c1=" << c1 << " " << testing::PrintToString(rep.failures);
    EXPECT_GT(rep.lhs, 0.0);
  }
  const auto neg = c1_forcing_probe(g, sigma, 4.0);
  EXPECT_LT(neg.lhs, 0.0);
}

TEST(Corollary, BoundAndScaleInvariance) {
  for (int n : {2, 3}) {
    const ScalarField u = mean_zero_scalar(n, 9);
    const auto rep = corollary_check(u);
    EXPECT_TRUE(rep.passed);
    EXPECT_LE(rep.ratio, 1.02);
    EXPECT_NEAR(corollary_check(scaled(u, 7.0)).ratio, rep.ratio, 1e-10 * rep.ratio);
  }
  EXPECT_NEAR(paper_constant(PaperConstant::corollary_const, 3), 1.0 / std::sqrt(8.0 * pi * pi), 1e-14);
}

TEST(PointwiseIdentity, GeneralAndDivergenceFree) {
  const auto gen = cr_identity_check(mean_zero_field(2, 12));
  EXPECT_TRUE(gen.passed) << testing::PrintToString(gen.failures);
  EXPECT_LT(gen.details["relative_difference"].get<double>(), 0.03);
  FieldRecipe r;
  r.kind = RecipeKind::divfree_projected;
  r.params = {{"count", 3}};
  r.seed = 13;
  const auto df = cr_identity_check(generate_vector(r, grid_for(2)), true);
  EXPECT_TRUE(df.passed) << testing::PrintToString(df.failures);
  EXPECT_EQ(df.details["variant"], "divergence_free");
}

TEST(PointwiseIdentity, GradientForm) {
  for (int n : {2, 3}) {
    const auto rep = cre_identity_check(mean_zero_scalar(n, 14));
    EXPECT_TRUE(rep.passed) << "n=" << n << " " << testing::PrintToString(rep.failures);
    EXPECT_LT(rep.constant, 0.0);
  }
}

TEST(PointwiseIdentity, ZeroFieldIsDegenerate) {
  const auto rep = cr_identity_check(VectorField(grid_for(2)));
  EXPECT_TRUE(rep.degenerate);
  EXPECT_FALSE(rep.gated);
}

TEST(PotentialForm, AgreesWithFieldFormAndBound) {
  for (int n : {2, 3}) {
    const auto rep = prop4_check(mean_zero_field(n, 15));
    EXPECT_TRUE(rep.passed) << "n=" << n << " " << testing::PrintToString(rep.failures);
    EXPECT_LE(rep.details["g_form_agreement"].get<double>(), 1e-10);
    EXPECT_LE(rep.ratio, 1.02);
  }
}
