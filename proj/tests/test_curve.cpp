#include "test_support.hpp"

#include <boost/math/special_functions/ellint_1.hpp>
#include <gtest/gtest.h>

#include <numbers>

using namespace chainent;

namespace {

// Distance from v to the lattice Z^g + Pi Z^g.
double lattice_residual(const VecC& v, const MatC& Pi) {
  Eigen::MatrixXd Y = Pi.imag();
  Eigen::VectorXd m = Y.ldlt().solve(v.imag()).array().round().matrix();
  VecC r = v - Pi * m.cast<cplx>();
  r.real() = r.real().array() - r.real().array().round();
  return r.cwiseAbs().maxCoeff();
}

std::vector<ChainModel> models() {
  return {make_xy_model(2.0, 0.5), fixtures::genus3_model(), fixtures::model_with_roots(0.6, 3.0),
          make_custom_model({-2.0, 0.4, 0.3, 0.1}, {0.5, 0.2, 0.1}, 0.4)};
}

}  // namespace

TEST(Curve, EllipticOracle) {
  Curve c(order_lambdas({cplx(2.0), cplx(3.0)}));
  ASSERT_EQ(c.genus(), 1);
  double e1 = 1. / 3, e2 = 0.5, e3 = 2, e4 = 3;
  double k = std::sqrt((e2 - e1) * (e4 - e3) / ((e3 - e1) * (e4 - e2)));
  cplx oracle(0, boost::math::ellint_1(std::sqrt(1 - k * k)) / boost::math::ellint_1(k));
  EXPECT_NEAR(std::abs(c.data().Pi(0, 0) - oracle), 0, 1e-9);
}

TEST(Curve, RiemannRelations) {
  for (const auto& m : models()) {
    Curve c(analyze(m));
    const MatC& Pi = c.data().Pi;
    EXPECT_LT((Pi - Pi.transpose()).cwiseAbs().maxCoeff(), 1e-9) << m.label;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Pi.imag());
    EXPECT_GT(es.eigenvalues().minCoeff(), 1e-10) << m.label;
    EXPECT_EQ(c.genus(), 2 * m.n - 1);
  }
}

TEST(Curve, NormalizedAPeriods) {
  Curve c(analyze(fixtures::genus3_model()));
  const auto& d = c.data();
  MatC norm = d.basis * d.A.leftCols(d.genus).transpose();
  EXPECT_LT((norm - MatC::Identity(d.genus, d.genus)).cwiseAbs().maxCoeff(), 1e-10);
  VecC dd = d.A.leftCols(d.genus) * d.delta_coeffs - 0.5 * d.A.col(d.genus);
  EXPECT_LT(dd.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Curve, KappaIsAbelImageOfInfinity) {
  for (const auto& m : models()) {
    Curve c(analyze(m));
    EXPECT_LT((c.data().kappa - c.data().omega_inf).cwiseAbs().maxCoeff(), 1e-8) << m.label;
  }
}

TEST(Curve, AbelMapAtBranchPointsMatchesTable) {
  for (const auto& m : models()) {
    Curve c(analyze(m));
    EXPECT_LT(c.abel_at_branch_point(1).cwiseAbs().maxCoeff(), 1e-15);
    for (int i = 2; i <= 4 * m.n; ++i) {
      VecC d = c.abel_at_branch_point(i) - abel_branch_point(c, i).value;
      EXPECT_LT(lattice_residual(d, c.data().Pi), 1e-8) << m.label << " i=" << i;
    }
  }
}

TEST(Curve, ThetaVanishesAtOddBranchPoints) {
  for (const auto& m : models()) {
    Curve c(analyze(m));
    auto ctx = make_theta_context(c.data().Pi);
    double scale = 0, odd = 0, even = 1e300;
    for (int i = 2; i <= 4 * m.n; ++i) {
      double t = std::abs(theta(abel_branch_point(c, i).value, ctx));
      if (i % 2) odd = std::max(odd, t);
      else {
        scale = std::max(scale, t);
        even = std::min(even, t);
      }
    }
    EXPECT_LT(odd, 1e-8 * scale) << m.label;
    EXPECT_GT(even, 1e-6 * scale) << m.label;
  }
}

TEST(Curve, GenusOneRiemannConstantIsSingleHalfPeriod) {
  Curve c(analyze(make_xy_model(2.0, 0.5)));
  VecC d = c.data().K + abel_branch_point(c, 3).value;
  EXPECT_LT(lattice_residual(d, c.data().Pi), 1e-10);
}

TEST(Curve, TwiceRiemannConstantOnLattice) {
  for (const auto& m : models()) {
    Curve c(analyze(m));
    EXPECT_LT(lattice_residual(VecC(2.0 * c.data().K), c.data().Pi), 1e-8) << m.label;
  }
}

TEST(Curve, ThetaAtHalfTauNonzero) {
  for (const auto& m : models()) {
    Curve c(analyze(m));
    auto ctx = make_theta_context(c.data().Pi);
    EXPECT_GT(std::abs(theta(c.data().tau_half, ctx)), 1e-6) << m.label;
  }
}

TEST(Curve, SymmetricModelHasRealThetaAtHalfTau) {
  Curve c(analyze(fixtures::model_with_roots(0.5, 3.0)));
  auto ctx = make_theta_context(c.data().Pi);
  cplx t = theta(c.data().tau_half, ctx);
  EXPECT_LT(std::abs(t.imag()), 1e-9 * std::abs(t));
}

TEST(Curve, AbelMapContinuousOffSigma) {
  Curve c(analyze(fixtures::genus3_model()));
  for (cplx z : {cplx(0.15, 1.7), cplx(-2.5, 0.3), cplx(0.9, -2.2)}) {
    VecC d = c.abel_map(z + cplx(1e-7, 1e-7)) - c.abel_map(z);
    EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-5);
    EXPECT_LT((c.abel_map(z, 2) + c.abel_map(z, 1)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

// Delta(z) + log(z - lambda_1)/2 tends to a constant with an O(1/z) remainder.
TEST(Curve, DeltaLogarithmicGrowth) {
  Curve c(analyze(make_xy_model(2.0, 0.5)));
  const cplx l1 = c.lambda().front();
  auto reg = [&](double r) {
    cplx z(r, 0.37 * r);
    return c.delta_integral(z) + 0.5 * std::log(z - l1);
  };
  auto gap = [&](double r) {
    cplx d = reg(r) - reg(10 * r);
    return std::hypot(d.real(), std::remainder(d.imag(), std::numbers::pi));
  };
  const double g3 = gap(1e3), g4 = gap(1e4);
  EXPECT_LT(g4, 1e-4);
  EXPECT_NEAR(g3 / g4, 10.0, 0.5);
}

TEST(Curve, CriticalSymbolRejected) {
  auto s = analyze(make_xx_model(1.5));
  try {
    Curve c(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CriticalSymbol);
  }
}
