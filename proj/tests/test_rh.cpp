#include "test_support.hpp"

#include <gtest/gtest.h>

#include <memory>

using namespace chainent;

namespace {

struct Stack {
  SymbolData s;
  std::unique_ptr<Curve> c;
  std::unique_ptr<ThetaAsymptotics> ta;
  std::unique_ptr<RHSolution> rh;

  Stack(const ChainModel& m, double lam) : s(analyze(m)) {
    c = std::make_unique<Curve>(s);
    ta = std::make_unique<ThetaAsymptotics>(*c);
    rh = std::make_unique<RHSolution>(*ta, s, lam);
  }
};

class RH : public ::testing::TestWithParam<int> {
 protected:
  static ChainModel model(int k) {
    return k == 0 ? make_xy_model(2.0, 0.5) : k == 1 ? fixtures::genus3_model() : fixtures::model_with_roots(0.6, 3.0);
  }
};

}  // namespace

TEST(RHBasics, PauliMatrices) {
  EXPECT_LT(max_abs(sigma1() * sigma1() - Mat2::Identity()), 1e-15);
  EXPECT_LT(max_abs(sigma3() * sigma1() + sigma1() * sigma3()), 1e-15);
}

TEST(RHBasics, RejectsLambdaInsideUnitInterval) {
  auto s = analyze(make_xy_model(2.0, 0.5));
  Curve c(s);
  ThetaAsymptotics ta(c);
  EXPECT_THROW(RHSolution(ta, s, 0.5), Error);
}

TEST_P(RH, JumpConditions) {
  Stack st(model(GetParam()), 2.0);
  for (const auto& r : verify_jumps(*st.rh)) {
    EXPECT_LT(r.extrapolated, 1e-8) << "cut " << r.cut;
    EXPECT_LT(r.continuity, 1e-8) << "cut " << r.cut;
  }
  EXPECT_LT(verify_gap_continuity(*st.rh), 1e-4);
}

TEST_P(RH, WienerHopfFactorization) {
  Stack st(model(GetParam()), 3.0);
  auto f = wiener_hopf_factors(*st.rh, st.s);
  EXPECT_LT(f.u_residual, 1e-10);
  EXPECT_LT(f.v_residual, 1e-10);
  EXPECT_LT(f.oracle_residual, 1e-10);
  EXPECT_LT(f.u_minus_infinity, 1e-8);
}

TEST_P(RH, ThetaAtInfinityDiagonal) {
  Stack st(model(GetParam()), 2.0);
  auto r = verify_theta_infinity(*st.rh);
  EXPECT_LT(r.diagonal_mismatch, 1e-8);
  EXPECT_LT(r.off_diagonal, 1e-8);
}

TEST_P(RH, DeterminantOfSolutionMatchesG) {
  Stack st(model(GetParam()), 2.5);
  EXPECT_LT(verify_determinant_ratio(*st.rh), 1e-9);
}

TEST_P(RH, ThetaNonvanishingOnImaginaryBeta) {
  Stack st(model(GetParam()), 2.0);
  auto r = verify_nonvanishing(*st.ta);
  EXPECT_GT(r.min_ratio, 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Models, RH, ::testing::Values(0, 1, 2));
