#pragma once

#include <chainent/errors.hpp>
#include <chainent/model.hpp>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include <functional>
#include <numbers>

namespace chainent {

using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

struct ThetaContext {
  MatC Pi;
  Eigen::MatrixXd Y;
  Eigen::MatrixXd Yinv;
  Eigen::MatrixXd T;  // upper triangular, T^T T = pi Y
  double trunc_radius = 0.0;
  double min_im_eig = 0.0;
  double tail_bound = 0.0;
  int genus = 0;
};

namespace detail {

// Visit every n in Z^g with |T(n - c)|^2 <= R2.
template <class F>
void enumerate_ellipsoid(const Eigen::MatrixXd& T, const Eigen::VectorXd& c, double R2, F&& visit) {
  const int g = static_cast<int>(c.size());
  Eigen::VectorXi n(g);
  std::vector<double> partial(g + 1, 0.0);
  std::function<void(int)> rec = [&](int i) {
    if (i < 0) {
      visit(n);
      return;
    }
    double shift = 0;
    for (int j = i + 1; j < g; ++j) shift += T(i, j) * (n(j) - c(j));
    double center = c(i) - shift / T(i, i);
    double rem = R2 - partial[i + 1];
    if (rem < 0) return;
    double rad = std::sqrt(rem) / T(i, i);
    int lo = static_cast<int>(std::ceil(center - rad)), hi = static_cast<int>(std::floor(center + rad));
    for (int k = lo; k <= hi; ++k) {
      n(i) = k;
      double t = T(i, i) * (k - c(i)) + shift;
      partial[i] = partial[i + 1] + t * t;
      rec(i - 1);
    }
  };
  rec(g - 1);
}

}  // namespace detail

inline ThetaContext make_theta_context(const MatC& Pi, double tol = 1e-16) {
  ThetaContext ctx;
  ctx.Pi = Pi;
  ctx.genus = static_cast<int>(Pi.rows());
  const int g = ctx.genus;
  if ((Pi - Pi.transpose()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, Pi.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::DomainError, "theta", "period matrix is not symmetric");
  }
  ctx.Y = 0.5 * (Pi.imag() + Pi.imag().transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ctx.Y);
  ctx.min_im_eig = es.eigenvalues().minCoeff();
  if (!(ctx.min_im_eig > 0)) {
    throw Error(ErrorKind::DomainError, "theta", "Im Pi is not positive definite");
  }
  ctx.Yinv = ctx.Y.inverse();
  Eigen::LLT<Eigen::MatrixXd> llt(std::numbers::pi * ctx.Y);
  ctx.T = llt.matrixU();
  // Shortest nonzero vector of the lattice T Z^g.
  double r2 = 1e300;
  for (int i = 0; i < g; ++i) r2 = std::min(r2, ctx.T.col(i).squaredNorm());
  double shortest2 = r2;
  detail::enumerate_ellipsoid(ctx.T, Eigen::VectorXd::Zero(g), r2 * (1 + 1e-12), [&](const Eigen::VectorXi& n) {
    if (n.isZero()) return;
    shortest2 = std::min(shortest2, (ctx.T * n.cast<double>()).squaredNorm());
  });
  const double rho = std::sqrt(shortest2);
  // Tail bound (g/2)(2/rho)^g Gamma(g/2, (R - rho/2)^2), valid for R > (sqrt(g) + rho)/2.
  double R = 0.5 * (std::sqrt(double(g)) + rho) + 0.1;
  auto bound = [&](double r) {
    double x = (r - 0.5 * rho) * (r - 0.5 * rho);
    return 0.5 * g * std::pow(2.0 / rho, g) * boost::math::tgamma(0.5 * g, x);
  };
  while (bound(R) > tol) R += 0.05;
  ctx.trunc_radius = R;
  ctx.tail_bound = bound(R);
  double vol = std::pow(std::numbers::pi, 0.5 * g) / std::tgamma(0.5 * g + 1) * std::pow(R + rho, g) /
               ctx.T.diagonal().prod();
  if (vol > 1e7) {
    throw Error(ErrorKind::TruncationOverflow, "theta", "ellipsoid needs more than 1e7 lattice points");
  }
  return ctx;
}

// log theta(s). The quasi-periodic reduction s = s' + Pi M + N keeps the sum well scaled.
inline cplx log_theta(const VecC& s, const ThetaContext& ctx) {
  const double pi = std::numbers::pi;
  const cplx I(0, 1);
  Eigen::VectorXd y = s.imag();
  Eigen::VectorXd Mr = (ctx.Yinv * y).array().round().matrix();
  VecC M = Mr.cast<cplx>();
  VecC sp = s - ctx.Pi * M;
  Eigen::VectorXd re = sp.real();
  sp -= re.array().round().matrix().cast<cplx>();
  cplx quasi = 2.0 * pi * I * (-(M.transpose() * sp)(0) - 0.5 * (M.transpose() * ctx.Pi * M)(0));

  Eigen::VectorXd c = -ctx.Yinv * sp.imag();
  const double shift = pi * c.dot(ctx.Y * c);
  cplx sum = 0.0;
  detail::enumerate_ellipsoid(ctx.T, c, ctx.trunc_radius * ctx.trunc_radius, [&](const Eigen::VectorXi& n) {
    VecC nc = n.cast<cplx>();
    cplx ex = I * pi * (nc.transpose() * ctx.Pi * nc)(0) + 2.0 * pi * I * (nc.transpose() * sp)(0);
    sum += std::exp(ex - shift);
  });
  return std::log(sum) + shift + quasi;
}

inline cplx theta(const VecC& s, const ThetaContext& ctx) { return std::exp(log_theta(s, ctx)); }

inline double theta_quasi_shift_check(const VecC& s, const Eigen::VectorXi& M, const ThetaContext& ctx) {
  const cplx I(0, 1);
  VecC Mc = M.cast<cplx>();
  cplx factor = std::exp(2.0 * std::numbers::pi * I *
                         (-(Mc.transpose() * s)(0) - 0.5 * (Mc.transpose() * ctx.Pi * Mc)(0)));
  // Direct lattice sum at s + Pi M, without reduction, to make the check non-circular.
  auto direct = [&](const VecC& arg) {
    Eigen::VectorXd c = -ctx.Yinv * arg.imag();
    double shift = std::numbers::pi * c.dot(ctx.Y * c);
    cplx sum = 0.0;
    detail::enumerate_ellipsoid(ctx.T, c, ctx.trunc_radius * ctx.trunc_radius, [&](const Eigen::VectorXi& n) {
      VecC nc = n.cast<cplx>();
      sum += std::exp(I * std::numbers::pi * (nc.transpose() * ctx.Pi * nc)(0) +
                      2.0 * std::numbers::pi * I * (nc.transpose() * arg)(0) - shift);
    });
    return std::pair<cplx, double>(sum, shift);
  };
  auto [a, sa] = direct(s + ctx.Pi * Mc);
  auto [b, sb] = direct(s);
  cplx lhs = a * std::exp(sa - sb);
  cplx rhs = factor * b;
  return std::abs(lhs - rhs) / std::abs(b);
}

// theta[eps; delta](s) = exp(2 pi i (eps Pi eps / 8 + eps s / 2 + eps delta / 4)) theta(s + delta/2 + Pi eps/2)
inline cplx theta_char(const Eigen::VectorXd& eps, const Eigen::VectorXd& delta, const VecC& s,
                       const ThetaContext& ctx) {
  const cplx I(0, 1);
  VecC e = eps.cast<cplx>(), d = delta.cast<cplx>();
  cplx pre = 2.0 * std::numbers::pi * I *
             ((e.transpose() * ctx.Pi * e)(0) / 8.0 + 0.5 * (e.transpose() * s)(0) + 0.25 * eps.dot(delta));
  return std::exp(pre + log_theta(s + 0.5 * d + 0.5 * ctx.Pi * e, ctx));
}

struct LogThetaPath {
  std::vector<double> t;
  std::vector<cplx> values;
  int winding = 0;  // net number of 2 pi i branch changes
};

// Continuous log theta along s(t), t in [0, 1]. Steps are halved until consecutive
// phase changes stay below pi/2.
inline LogThetaPath log_theta_path(const std::function<VecC(double)>& path, const ThetaContext& ctx,
                                   int nodes = 64, double zero_tol = 1e-12) {
  LogThetaPath out;
  const double pi = std::numbers::pi;
  auto raw = [&](double t) {
    cplx v = log_theta(path(t), ctx);
    if (std::exp(v.real()) < zero_tol) {
      throw Error(ErrorKind::ZeroOnPath, "theta", "theta vanishes along the path");
    }
    return v;
  };
  double t = 0.0;
  cplx prev = raw(0.0);
  out.t.push_back(0.0);
  out.values.push_back(prev);
  double h = 1.0 / nodes;
  double unwrap = 0.0;
  while (t < 1.0 - 1e-15) {
    double step = std::min(h, 1.0 - t);
    cplx v;
    for (int tries = 0;; ++tries) {
      v = raw(t + step);
      double d = std::remainder(v.imag() + unwrap - prev.imag(), 2 * pi);
      if (std::abs(d) < 0.5 * pi || tries > 40) break;
      step *= 0.5;
    }
    double target = prev.imag() + std::remainder(v.imag() + unwrap - prev.imag(), 2 * pi);
    double k = std::round((target - v.imag() - unwrap) / (2 * pi));
    unwrap += 2 * pi * k;
    cplx cont(v.real(), v.imag() + unwrap);
    t += step;
    out.t.push_back(t);
    out.values.push_back(cont);
    prev = cont;
  }
  // Compare the unwrapped branch with the principal reduced value at the end.
  out.winding = static_cast<int>(std::round(unwrap / (2 * pi)));
  return out;
}

}  // namespace chainent
