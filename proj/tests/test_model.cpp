#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace chainent;

TEST(Model, XxPresetHasRealReciprocalRoots) {
  auto s = analyze(make_xy_model(0.8, 0.0));
  ASSERT_EQ(s.roots.size(), 2u);
  EXPECT_TRUE(fixtures::contains(s.roots, 0.5, 1e-12));
  EXPECT_TRUE(fixtures::contains(s.roots, 2.0, 1e-12));
}

TEST(Model, XyPresetComplexRoots) {
  auto s = analyze(make_xy_model(2.0, 0.5));
  EXPECT_TRUE(fixtures::contains(s.roots, cplx(1, std::sqrt(2.0)), 1e-12));
  EXPECT_TRUE(fixtures::contains(s.roots, cplx(1, -std::sqrt(2.0)), 1e-12));
}

TEST(Model, IsingLimitIsDegenerate) {
  EXPECT_THROW(make_xy_model(1.0, 1.0), Error);
  try {
    make_xy_model(1.0, 1.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateModel);
    EXPECT_EQ(e.module(), "model");
  }
}

TEST(Model, CustomConstruction) {
  auto m = fixtures::genus3_model();
  EXPECT_EQ(m.n, 2);
  auto xx = make_custom_model({-2.0, 1.0}, {0.0}, 0.0);
  EXPECT_EQ(xx.n, 1);
  // a(1) = 0, b(1) = 1, gamma = 1: effective leading coefficients are -1 and 1.
  EXPECT_NO_THROW(make_custom_model({-2.0, 0.0}, {1.0}, 1.0));
}

TEST(Model, RejectsBadShapes) {
  EXPECT_THROW(make_custom_model({1.0}, {}, 0.0), Error);
  EXPECT_THROW(make_custom_model({-2.0, 1.0}, {1.0, 2.0}, 0.0), Error);
  EXPECT_THROW(make_custom_model({-2.0, 1.0}, {1.0}, std::nan("")), Error);
  EXPECT_THROW(make_custom_model({-2.0, 1.0}, {1.0}, 1.0), Error);
}

TEST(Model, QCoefficientsAntisymmetricPart) {
  auto m = fixtures::genus3_model();
  for (int j = 1; j <= m.n; ++j) {
    EXPECT_DOUBLE_EQ(m.q_coeff(j) + m.q_coeff(-j), 2 * m.a_at(j));
    EXPECT_DOUBLE_EQ(m.q_coeff(-j) - m.q_coeff(j), 2 * m.gamma * m.b_at(j));
  }
}

TEST(Model, PIsZnTimesQ) {
  auto m = fixtures::genus3_model();
  auto q = build_q(m);
  auto p = build_p(m);
  EXPECT_EQ(p.degree(), 2 * m.n);
  for (cplx z : {cplx(0.3, 0.7), cplx(-1.2, 0.4), cplx(2.0, -0.1)}) {
    EXPECT_LT(std::abs(p(z) - std::pow(z, m.n) * q(z)), 1e-12);
  }
}

TEST(Model, XxQuadraticNormalized) {
  auto p = build_p(make_xx_model(0.8));
  const cplx lead = p.coeffs.back();
  EXPECT_NEAR(std::abs(p.coeffs[1] / lead - cplx(-2.5)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(p.coeffs[0] / lead - cplx(1.0)), 0.0, 1e-14);
}
