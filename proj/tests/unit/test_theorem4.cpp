#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

using namespace potlab;
using namespace potlab::lab;
using namespace testutil;

namespace {

VectorField field3(std::uint64_t seed, int count = 2) {
  return generate_vector(bumps(seed, true, true, count), make_grid(3, 8.0, 24));
}

VectorField field2(std::uint64_t seed) { return generate_vector(bumps(seed, true), make_grid(2, 8.0, 64)); }

}  // namespace

TEST(Theorem4, TripleIsAdmissible) {
  const auto t = make_theorem4_triple(field3(1), field3(2));
  EXPECT_LE(spectral::divergence_residual(t.w), 1e-10);
  EXPECT_LE(spectral::divergence_residual(add(t.f, t.g)), 1e-10);
  const auto terms = lab::detail::theorem4_terms(t.g, field3(2));
  EXPECT_LE(terms.div_w, 1e-10);
  EXPECT_LE(terms.curl_w, 1e-8);
}

TEST(Theorem4, BoundHoldsOnRandomTriples) {
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const auto rep = theorem4_check(field3(10 * s), field3(10 * s + 1));
    EXPECT_TRUE(rep.passed) << testing::PrintToString(rep.failures);
    EXPECT_LE(rep.ratio, 1.02);
    EXPECT_GT(rep.ratio, 0.0);
    EXPECT_NEAR(rep.constant, 1.0 / (4.0 * pi * pi), 1e-14);
  }
}

TEST(Theorem4, VanishingVorticitySource) {
  const auto rep = theorem4_check(VectorField(make_grid(3, 8.0, 24)), field3(5));
  EXPECT_TRUE(rep.degenerate);
  EXPECT_TRUE(rep.gated);
  EXPECT_TRUE(rep.passed) << testing::PrintToString(rep.failures);
  EXPECT_LE(rep.lhs, 1e-8 * rep.details["curl_f_scale"].get<double>());
}

TEST(Theorem4, Preconditions) {
  EXPECT_THROW(theorem4_check(field2(1), field2(2)), InvalidArgument);
  const VectorField massive = generate_vector(bumps(3, true, false), make_grid(3, 8.0, 24));
  EXPECT_THROW(theorem4_check(massive, field3(4)), MeanNotZero);
  EXPECT_THROW(theorem4_check(field3(4), massive), MeanNotZero);
}

TEST(Remark5, CalibratedConstantTransfersToOtherFields) {
  const double c = remark5_calibrate(field2(17));
  ASSERT_TRUE(std::isfinite(c));
  EXPECT_GT(c, 0.0);
  for (std::uint64_t s = 1; s <= 4; ++s) {
    const auto rep = remark5_check(field2(s), c);
    EXPECT_TRUE(rep.passed) << "seed=" << s << " " << testing::PrintToString(rep.failures);
    EXPECT_LT(rep.details["relative_difference"].get<double>(), 0.03);
  }
}

TEST(Remark5, CalibrationIsAmplitudeInvariant) {
  const VectorField g = field2(17);
  const double c = remark5_calibrate(g);
  EXPECT_NEAR(remark5_calibrate(scaled(g, 5.0)), c, 1e-12 * c);
}

TEST(Remark5, BesselWeightBoundedByOne) {
  for (int n : {2, 3}) {
    const double m = max_t_bessel_k1(make_grid(n, 8.0, n == 2 ? 64 : 24));
    EXPECT_LE(m, 1.0);
    EXPECT_GT(m, 0.9);
  }
  EXPECT_EQ(t_bessel_k1(0.0), 1.0);
}

TEST(Remark5, RejectsNonzeroMean) {
  const VectorField massive = generate_vector(bumps(3, true, false), make_grid(2, 8.0, 64));
  EXPECT_THROW(remark5_calibrate(massive), MeanNotZero);
  EXPECT_THROW(remark5_check(massive, 1.0), MeanNotZero);
}
