#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace chainent;

TEST(Symbol, FindRootsQuadratic) {
  ComplexPolynomial p{{1.0, -2.5, 1.0}, 0};
  auto r = find_roots(p);
  EXPECT_TRUE(fixtures::contains(r, 0.5, 1e-13));
  EXPECT_TRUE(fixtures::contains(r, 2.0, 1e-13));
}

TEST(Symbol, FindRootsFactoredQuartic) {
  // (z^2 + 1/4)(z^2 + 4)
  ComplexPolynomial p{{1.0, 0.0, 4.25, 0.0, 1.0}, 0};
  auto r = find_roots(p);
  for (cplx z : {cplx(0, 0.5), cplx(0, -0.5), cplx(0, 2), cplx(0, -2)}) EXPECT_TRUE(fixtures::contains(r, z, 1e-12));
}

TEST(Symbol, UnitCircleRootsAreCritical) {
  ComplexPolynomial p{{1.0, 0.0, 1.0}, 0};
  auto r = find_roots(p);
  EXPECT_TRUE(fixtures::contains(r, cplx(0, 1), 1e-13));
  EXPECT_THROW(order_lambdas(r), Error);
  auto s = analyze(make_xx_model(1.5));
  EXPECT_TRUE(s.critical());
  EXPECT_TRUE(s.lambda.empty());
  EXPECT_NEAR(s.crit_distance, 0.0, 1e-12);
}

TEST(Symbol, RealPairOrdering) {
  auto s = analyze(make_xx_model(0.8));
  ASSERT_EQ(s.lambda.size(), 4u);
  EXPECT_NEAR(std::abs(s.lambda[0] - 0.5), 0, 1e-12);
  EXPECT_NEAR(std::abs(s.lambda[1] - 0.5), 0, 1e-12);
  EXPECT_NEAR(std::abs(s.lambda[2] - 2.0), 0, 1e-12);
  EXPECT_NEAR(std::abs(s.lambda[3] - 2.0), 0, 1e-12);
  EXPECT_EQ(s.family[0], Family::Reciprocal);
}

TEST(Symbol, LambdaSetClosedUnderReciprocalAndConjugate) {
  auto s = analyze(fixtures::genus3_model());
  ASSERT_EQ(s.lambda.size(), 8u);
  for (std::size_t i = 0; i < s.lambda.size(); ++i) {
    EXPECT_NEAR(std::abs(s.lambda[s.reciprocal_partner[i]] * s.lambda[i] - 1.0), 0, 1e-10);
    EXPECT_NEAR(std::abs(s.lambda[s.conjugate_partner[i]] - std::conj(s.lambda[i])), 0, 1e-10);
  }
}

TEST(Symbol, GIsMinusOneForGappedXx) {
  auto s = analyze(make_xx_model(0.8));
  for (int k = 0; k < 16; ++k) {
    EXPECT_NEAR(std::abs(eval_g_circle(s, 2 * std::numbers::pi * k / 16) + 1.0), 0, 1e-12);
  }
}

TEST(Symbol, GUnimodularAndConjugateSymmetric) {
  auto s = analyze(fixtures::genus3_model());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 2 * std::numbers::pi);
  for (int k = 0; k < 32; ++k) {
    double t = u(rng);
    cplx g = eval_g_circle(s, t);
    EXPECT_NEAR(std::abs(g), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(eval_g_circle(s, -t) - std::conj(g)), 0, 1e-12);
  }
}

TEST(Symbol, GFunctionPositiveAtLargeReal) {
  auto s = analyze(make_xy_model(2.0, 0.5));
  GFunction g(s);
  cplx v = g(cplx(1e4, 0));
  EXPECT_GT(v.real(), 0);
  EXPECT_LT(std::abs(v.imag()), 1e-8 * std::abs(v));
}

TEST(Symbol, GFunctionMatchesCircleUpToSign) {
  for (auto m : {make_xy_model(2.0, 0.5), fixtures::genus3_model()}) {
    auto s = analyze(m);
    GFunction g(s);
    for (int k = 0; k < 64; ++k) {
      double t = 2 * std::numbers::pi * (k + 0.37) / 64;
      cplx z = std::polar(1.0, t);
      double near = 1e9;
      for (int c = 1; c <= 2 * s.n(); ++c) near = std::min(near, distance_to_segment(z, s.cut(c)[0], s.cut(c)[1]));
      if (near < 1e-3) continue;
      EXPECT_NEAR(std::abs(std::abs(g(z)) - 1.0), 0, 1e-10);
      EXPECT_NEAR(std::abs(g(z) * g(z) - eval_g_circle(s, t) * eval_g_circle(s, t)), 0, 1e-10);
    }
  }
}

TEST(Symbol, SymbolMatrixStructure) {
  Mat2 m = eval_symbol(cplx(0.6, 0.8), 0.0);
  EXPECT_EQ(m(0, 0), cplx(0));
  EXPECT_EQ(m(1, 1), cplx(0));
  EXPECT_NE(m(0, 1), cplx(0));
}
