#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace chainent;

TEST(Beta, ClosedForm) {
  cplx b = beta(2.0);
  EXPECT_NEAR(b.real(), 0.0, 1e-15);
  EXPECT_NEAR(b.imag(), -std::log(3.0) / (2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(b.imag(), -0.174850, 1e-6);
  EXPECT_NEAR(std::abs(beta(-2.0) + b), 0, 1e-15);
}

TEST(Beta, RejectsInterval) {
  EXPECT_THROW(beta(0.5), Error);
  EXPECT_THROW(beta(1.0), Error);
  EXPECT_NO_THROW(beta(cplx(0.5, 0.1)));
}

TEST(Beta, CothMap) {
  for (double u : {0.1, 1.0, 7.0}) {
    EXPECT_NEAR(beta(lambda_of_u(u)).imag(), -u / (2 * std::numbers::pi), 1e-13);
    double h = 1e-6;
    EXPECT_NEAR(dlambda_du(u), (lambda_of_u(u + h) - lambda_of_u(u - h)) / (2 * h), 1e-6 * std::abs(dlambda_du(u)));
  }
}

TEST(Beta, SquaredIntegralIsMinusOneSixth) { EXPECT_NEAR(beta_squared_integral(), -1.0 / 6.0, 1e-9); }

class ThetaEntropy : public ::testing::TestWithParam<int> {};

TEST_P(ThetaEntropy, MatchesExactEngine) {
  ChainModel m = GetParam() == 0   ? make_xy_model(2.0, 0.5)
                 : GetParam() == 1 ? fixtures::genus3_model()
                                   : fixtures::model_with_roots(0.6, 3.0);
  auto s = analyze(m);
  Curve c(s);
  ThetaAsymptotics ta(c);
  auto est = entropy_theta(ta);
  EXPECT_NEAR(est.value, entropy_exact(s, 200).value, 1e-8) << m.label;
  EXPECT_LT(est.diagnostics.at("integrand_imag_max"), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Models, ThetaEntropy, ::testing::Values(0, 1, 2));

TEST(ThetaEntropyConstant, PolarizedSymbolShortCircuits) {
  auto s = analyze(make_xx_model(0.8));
  EXPECT_TRUE(symbol_is_constant(s));
  EXPECT_EQ(entropy_theta(s).value, 0.0);
}

TEST(ThetaEntropyConstant, CriticalSymbolThrows) {
  auto s = analyze(make_xx_model(1.5));
  ASSERT_TRUE(s.critical());
  try {
    entropy_theta(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CriticalSymbol);
  }
}

TEST(Determinant, ThetaRatioAsymptotics) {
  auto s = analyze(fixtures::genus3_model());
  Curve c(s);
  ThetaAsymptotics ta(c);
  auto g = fourier_coefficients_auto(s, 120);
  for (double lam : {1.5, 3.0, -2.0}) {
    cplx direct = toeplitz_determinant_direct(g, lam, 60);
    cplx asym = determinant_asymptotic(ta, lam, 60).value;
    EXPECT_LT(std::abs(direct / asym - 1.0), 1e-8) << lam;
  }
}

TEST(Determinant, ThetaRatioAtZeroBetaIsOne) {
  Curve c(analyze(make_xy_model(2.0, 0.5)));
  ThetaAsymptotics ta(c);
  EXPECT_LT(std::abs(ta.log_ratio(0.0)), 1e-14);
}

TEST(Endpoint, FitMatchesModel) {
  Curve c(analyze(make_xy_model(2.0, 0.5)));
  ThetaAsymptotics ta(c);
  auto fit = endpoint_fit(ta);
  EXPECT_LT(fit.rel_error, 1e-3);
  EXPECT_LT(fit.model, 0.0);
}

TEST(Series, AgreesWithThetaForXy) {
  for (auto m : {make_xy_model(2.0, 0.5), make_xy_model(0.7, 0.3)}) {
    Curve c(analyze(m));
    ThetaAsymptotics ta(c);
    auto series = xy_series_entropy(ta);
    EXPECT_NEAR(series.value, entropy_theta(ta).value, 1e-8);
    EXPECT_LT(series.diagnostics.at("mismatch"), 1e-8);
  }
}

TEST(Series, RejectsHigherGenus) {
  Curve c(analyze(fixtures::genus3_model()));
  ThetaAsymptotics ta(c);
  EXPECT_THROW(xy_series_entropy(ta), Error);
}

TEST(Critical, SinglePairClosedForm) {
  // Root at 0.9 sits 0.2111 from its reflection 1/0.9.
  auto s = analyze(fixtures::model_with_roots(0.9, 3.0 / 0.9));
  auto est = critical_entropy_estimate(s, 0.5);
  EXPECT_NEAR(est.value, -std::log(1.0 / 0.9 - 0.9) / 6.0, 1e-12);
  EXPECT_NEAR(est.value, 0.2593, 1e-4);
  EXPECT_THROW(critical_entropy_estimate(s, 0.1), Error);
}

TEST(Widom, UnimodularSymbolGivesOneMinusLambdaSquared) {
  auto s = analyze(fixtures::genus3_model());
  for (double lam : {1.5, 3.0}) EXPECT_NEAR(std::abs(widom_G(s, lam) - (1.0 - lam * lam)), 0, 1e-12);
}
