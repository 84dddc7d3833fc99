#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace chainent;

namespace {

MatC random_period_matrix(std::mt19937_64& rng, int g) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Eigen::MatrixXd X(g, g), A(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      X(i, j) = u(rng);
      A(i, j) = u(rng);
    }
  X = (0.5 * (X + X.transpose())).eval();
  Eigen::MatrixXd Y = A * A.transpose() + 0.6 * Eigen::MatrixXd::Identity(g, g);
  return X.cast<cplx>() + cplx(0, 1) * Y.cast<cplx>();
}

VecC random_vector(std::mt19937_64& rng, int g) {
  std::uniform_real_distribution<double> u(-1, 1);
  VecC s(g);
  for (int i = 0; i < g; ++i) s(i) = cplx(u(rng), 0.3 * u(rng));
  return s;
}

}  // namespace

TEST(Theta, JacobiSumOracle) {
  double one_d = 0;
  for (int m = -20; m <= 20; ++m) one_d += std::exp(-std::numbers::pi * m * m);
  EXPECT_NEAR(one_d, 1.0864348112133, 1e-12);
  auto ctx = make_theta_context(cplx(0, 1) * MatC::Identity(2, 2));
  cplx th = theta(VecC::Zero(2), ctx);
  EXPECT_NEAR(std::abs(th - one_d * one_d), 0, 1e-13);
}

TEST(Theta, GenusOneMatchesDirectSum) {
  MatC Pi(1, 1);
  Pi(0, 0) = cplx(0.2, 0.9);
  auto ctx = make_theta_context(Pi);
  VecC s(1);
  s(0) = cplx(0.31, -0.12);
  cplx direct = 0;
  for (int m = -30; m <= 30; ++m)
    direct += std::exp(cplx(0, std::numbers::pi) * double(m * m) * Pi(0, 0) + cplx(0, 2 * std::numbers::pi) * double(m) * s(0));
  EXPECT_NEAR(std::abs(theta(s, ctx) - direct), 0, 1e-13);
}

TEST(Theta, EvenAndPeriodic) {
  std::mt19937_64 rng(11);
  for (int g = 1; g <= 4; ++g) {
    auto ctx = make_theta_context(random_period_matrix(rng, g));
    for (int trial = 0; trial < 5; ++trial) {
      VecC s = random_vector(rng, g);
      cplx t = theta(s, ctx);
      EXPECT_LT(std::abs(theta(VecC(-s), ctx) - t), 1e-12 * std::max(1.0, std::abs(t)));
      VecC shift = s;
      shift(trial % g) += 1.0;
      EXPECT_LT(std::abs(theta(shift, ctx) - t), 1e-12 * std::max(1.0, std::abs(t)));
    }
  }
}

TEST(Theta, QuasiPeriodicity) {
  std::mt19937_64 rng(12);
  for (int g = 1; g <= 3; ++g) {
    auto ctx = make_theta_context(random_period_matrix(rng, g));
    Eigen::VectorXi M = Eigen::VectorXi::Zero(g);
    EXPECT_LT(theta_quasi_shift_check(random_vector(rng, g), M, ctx), 1e-14);
    M(0) = 1;
    if (g > 1) M(g - 1) = -1;
    EXPECT_LT(theta_quasi_shift_check(random_vector(rng, g), M, ctx), 1e-10);
  }
}

TEST(Theta, OddCharacteristicVanishesAtOrigin) {
  MatC Pi(1, 1);
  Pi(0, 0) = cplx(0, 1.3);
  auto ctx = make_theta_context(Pi);
  Eigen::VectorXd one = Eigen::VectorXd::Ones(1), zero = Eigen::VectorXd::Zero(1);
  EXPECT_LT(std::abs(theta_char(one, one, VecC::Zero(1), ctx)), 1e-14);
  EXPECT_GT(std::abs(theta_char(one, zero, VecC::Zero(1), ctx)), 0.1);
  EXPECT_LT(std::abs(theta_char(zero, zero, VecC::Zero(1), ctx) - theta(VecC::Zero(1), ctx)), 1e-15);
}

TEST(Theta, LogThetaConsistent) {
  std::mt19937_64 rng(13);
  auto ctx = make_theta_context(random_period_matrix(rng, 3));
  VecC s = random_vector(rng, 3);
  EXPECT_LT(std::abs(std::exp(log_theta(s, ctx)) - theta(s, ctx)), 1e-13 * std::abs(theta(s, ctx)));
}

TEST(Theta, RejectsNonSymmetricPeriodMatrix) {
  MatC Pi = cplx(0, 1) * MatC::Identity(2, 2);
  Pi(0, 1) = 0.3;
  EXPECT_THROW(make_theta_context(Pi), Error);
}

TEST(Theta, RejectsNonPositiveImaginaryPart) {
  MatC Pi(1, 1);
  Pi(0, 0) = cplx(0.3, -0.1);
  EXPECT_THROW(make_theta_context(Pi), Error);
}
