#pragma once

#include <chainent/asymptotics.hpp>

#include <random>

namespace chainent {

inline Mat2 sigma1() { Mat2 m; m << 0, 1, 1, 0; return m; }
inline Mat2 sigma3() { Mat2 m; m << 1, 0, 0, -1; return m; }

inline Mat2 lambda_matrix(double lam) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = cplx(0, lam + 1);
  m(1, 1) = cplx(0, lam - 1);
  return m;
}

inline double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

// The closed-form Riemann-Hilbert solution for one lambda. When the first cut lies
// outside the circle, Theta is built with -beta and Lambda^{-1} moves to the right of S.
class RHSolution {
 public:
  RHSolution(const ThetaAsymptotics& ta, const SymbolData& s, double lam)
      : ta_(&ta), g_(s), lam_(lam) {
    if (std::abs(lam) <= 1.0) throw Error(ErrorKind::DomainError, "rh_verify", "|lambda| must exceed 1");
    const auto& d = ta.curve().data();
    beta_ = beta(cplx(lam, 0));
    outer_first_ = d.cut_outside[0];
    beta_eff_ = outer_first_ ? -beta_ : beta_;
    Lam_ = lambda_matrix(lam);
    theta_inf_ = theta_at_infinity();
    cplx ginf = g_.at_infinity();
    Qinf_ << ginf, -ginf, cplx(0, 1), cplx(0, 1);
  }

  cplx beta_value() const { return beta_; }
  double lambda() const { return lam_; }
  const Curve& curve() const { return ta_->curve(); }
  const GFunction& g() const { return g_; }
  const Mat2& Lambda() const { return Lam_; }

  Mat2 theta_matrix(cplx z) const {
    const auto& d = curve().data();
    const auto& ctx = ta_->context();
    AbelValue a = curve().abel(z);
    VecC be = beta_eff_ * d.e.cast<cplx>();
    const VecC& k = d.kappa;
    const VecC& t = d.tau_half;
    cplx lp = log_theta(a.omega + t, ctx), lm = log_theta(a.omega - t, ctx);
    cplx pre = -0.5 * a.log_shift;
    Mat2 T;
    T(0, 0) = std::exp(pre - a.delta + log_theta(a.omega + be - k + t, ctx) - lp);
    T(0, 1) = -std::exp(pre + a.delta + log_theta(a.omega - be + k - t, ctx) - lm);
    T(1, 0) = -std::exp(pre + a.delta + log_theta(a.omega + be + k - t, ctx) - lm);
    T(1, 1) = std::exp(pre - a.delta + log_theta(a.omega - be - k + t, ctx) - lp);
    return T;
  }

  // diag(theta(w + b e - k + t), theta(w - b e - k + t)) e^{-Delta_0} / theta(w + t), w = omega(infinity).
  const Mat2& theta_infinity() const { return theta_inf_; }

  Mat2 Q(cplx z) const {
    cplx gz = g_(z);
    Mat2 m;
    m << gz, -gz, cplx(0, 1), cplx(0, 1);
    return m;
  }

  Mat2 S(cplx z) const {
    Mat2 T = theta_matrix(z);
    if (outer_first_) return Qinf_ * theta_inf_.inverse() * T * Lam_.inverse();
    return Qinf_ * Lam_.inverse() * theta_inf_.inverse() * T;
  }

  Mat2 U_plus(cplx z) const { return Q(z) * S(z).inverse(); }
  Mat2 U_minus(cplx z) const { return S(z) * Lam_ * Q(z).inverse(); }
  Mat2 V_minus(cplx z) const { return sigma3() * U_minus(z).inverse() * sigma3(); }
  Mat2 V_plus(cplx z) const { return sigma3() * U_plus(z).inverse() * sigma3() * (1.0 - lam_ * lam_); }

  Mat2 phi(cplx z) const { return eval_symbol(g_(z), lam_); }

  Mat2 jump(int cut) const {
    if (!curve().data().cut_outside[cut - 1]) return sigma1();
    return Lam_ * sigma1() * Lam_.inverse();
  }

 private:
  const ThetaAsymptotics* ta_;
  GFunction g_;
  double lam_;
  cplx beta_, beta_eff_;
  bool outer_first_ = false;
  Mat2 Lam_, theta_inf_, Qinf_;

  Mat2 theta_at_infinity() const {
    const auto& d = curve().data();
    const auto& ctx = ta_->context();
    VecC be = beta_eff_ * d.e.cast<cplx>();
    const VecC& w = d.omega_inf;
    cplx den = log_theta(w + d.tau_half, ctx);
    Mat2 T = Mat2::Zero();
    T(0, 0) = std::exp(log_theta(w + be - d.kappa + d.tau_half, ctx) - den - d.delta_zero);
    T(1, 1) = std::exp(log_theta(w - be - d.kappa + d.tau_half, ctx) - den - d.delta_zero);
    return T;
  }
};

struct JumpReport {
  int cut = 0;
  bool outer = false;
  double residual = 0.0;       // S_+ - S_- J at offset delta
  double residual_half = 0.0;  // same at delta / 2
  double extrapolated = 0.0;   // with boundary values 2 S(z +- delta/2) - S(z +- delta)
  double continuity = 0.0;     // U_+ across inner cuts, U_- across outer cuts, extrapolated
};

// Points z +- delta n straddle cut i, with n the left normal of lambda_{2i-1} -> lambda_{2i}.
inline std::vector<JumpReport> verify_jumps(const RHSolution& rh, int samples_per_cut = 8, double delta = 1e-6) {
  const auto& L = rh.curve().lambda();
  const int ncut = static_cast<int>(L.size()) / 2;
  std::vector<JumpReport> out;
  for (int i = 1; i <= ncut; ++i) {
    cplx a = L[2 * i - 2], b = L[2 * i - 1];
    cplx nrm = cplx(0, 1) * (b - a) / std::abs(b - a);
    JumpReport r;
    r.cut = i;
    r.outer = rh.curve().data().cut_outside[i - 1];
    Mat2 J = rh.jump(i);
    auto U = [&](cplx z) { return r.outer ? rh.U_minus(z) : rh.U_plus(z); };
    for (int k = 0; k < samples_per_cut; ++k) {
      double t = 0.1 + 0.8 * (k + 0.5) / samples_per_cut;
      cplx z = a + (b - a) * t;
      Mat2 Sp1 = rh.S(z + delta * nrm), Sm1 = rh.S(z - delta * nrm);
      Mat2 Sp2 = rh.S(z + 0.5 * delta * nrm), Sm2 = rh.S(z - 0.5 * delta * nrm);
      Mat2 Sp = 2.0 * Sp2 - Sp1, Sm = 2.0 * Sm2 - Sm1;
      r.residual = std::max(r.residual, max_abs(Sp1 - Sm1 * J) / max_abs(Sm1));
      r.residual_half = std::max(r.residual_half, max_abs(Sp2 - Sm2 * J) / max_abs(Sm2));
      r.extrapolated = std::max(r.extrapolated, max_abs(Sp - Sm * J) / max_abs(Sm));
      Mat2 Up = 2.0 * U(z + 0.5 * delta * nrm) - U(z + delta * nrm);
      Mat2 Um = 2.0 * U(z - 0.5 * delta * nrm) - U(z - delta * nrm);
      r.continuity = std::max(r.continuity, max_abs(Up - Um) / max_abs(Um));
    }
    out.push_back(r);
  }
  return out;
}

// Theta has no jump across the gaps of Sigma.
inline double verify_gap_continuity(const RHSolution& rh, double delta = 1e-6) {
  const auto& L = rh.curve().lambda();
  double worst = 0;
  for (std::size_t i = 1; i + 1 < L.size(); i += 2) {
    cplx a = L[i], b = L[i + 1];
    cplx nrm = cplx(0, 1) * (b - a) / std::abs(b - a);
    cplx z = 0.5 * (a + b);
    Mat2 Sp = rh.S(z + delta * nrm), Sm = rh.S(z - delta * nrm);
    worst = std::max(worst, max_abs(Sp - Sm) / max_abs(Sm));
  }
  return worst;
}

struct FactorizationReport {
  double u_residual = 0.0;        // |U+ U- - Phi| / |Phi|
  double v_residual = 0.0;        // |V- V+ - Phi| / |Phi|
  double oracle_residual = 0.0;   // against eval_symbol with g = q/|q|, up to sigma_3 and transpose
  bool sign_flips = false;        // the straight cuts cross the circle, so the branch sign varies
  bool transposed = false;
  double u_minus_infinity = 0.0;  // |U-(inf) - I|, Richardson extrapolated
  int samples = 0;
};

// Richardson limit of F(z) as z -> infinity along a ray, assuming F = F_inf + O(1/z).
template <class F>
Mat2 limit_at_infinity(F&& f, cplx direction, double r0 = 2e3) {
  Mat2 f1 = f(r0 * direction), f2 = f(2 * r0 * direction), f4 = f(4 * r0 * direction);
  Mat2 r1 = 2.0 * f2 - f1, r2 = 2.0 * f4 - f2;
  return (4.0 * r2 - r1) / 3.0;
}

// The product-formula branch of g equals c q/|q| (c = +-1) on the circle, or c |q|/q after a
// family swap. Phi then differs from eval_symbol by sigma_3 conjugation, and by a transpose.
// c is constant unless a straight cut crosses the circle.
inline FactorizationReport wiener_hopf_factors(const RHSolution& rh, const SymbolData& s, int samples = 32) {
  FactorizationReport rep;
  rep.samples = samples;
  rep.transposed = s.swapped;
  double first_sign = 1.0;
  const auto& L = rh.curve().lambda();
  for (int k = 0; k < samples; ++k) {
    double th = 2 * std::numbers::pi * (k + 0.25) / samples;
    cplx z = std::polar(1.0, th);
    for (std::size_t i = 0; i + 1 < L.size(); i += 2) {
      if (distance_to_segment(z, L[i], L[i + 1]) < 1e-3) z *= std::polar(1.0, 2e-3);
    }
    Mat2 P = rh.phi(z);
    double sc = max_abs(P);
    rep.u_residual = std::max(rep.u_residual, max_abs(rh.U_plus(z) * rh.U_minus(z) - P) / sc);
    rep.v_residual = std::max(rep.v_residual, max_abs(rh.V_minus(z) * rh.V_plus(z) - P) / sc);
    cplx gc = eval_g_circle(s, std::arg(z));
    cplx c = s.swapped ? rh.g()(z) * gc : rh.g()(z) / gc;
    double sign = c.real() > 0 ? 1.0 : -1.0;
    if (k == 0) first_sign = sign;
    if (sign != first_sign) rep.sign_flips = true;
    Mat2 D = Mat2::Identity();
    D(1, 1) = sign;
    Mat2 R = D * P * D;
    if (s.swapped) R = sigma3() * R.transpose() * sigma3();
    Mat2 O = eval_symbol(s, std::arg(z), rh.lambda());
    rep.oracle_residual = std::max(rep.oracle_residual, max_abs(R - O) / max_abs(O));
  }
  Mat2 Uinf = limit_at_infinity([&](cplx z) { return rh.U_minus(z); }, std::polar(1.0, 0.3));
  rep.u_minus_infinity = max_abs(Uinf - Mat2::Identity());
  return rep;
}

struct InfinityReport {
  double diagonal_mismatch = 0.0;  // extrapolated Theta(inf) against the closed form
  double off_diagonal = 0.0;
};

inline InfinityReport verify_theta_infinity(const RHSolution& rh) {
  InfinityReport r;
  const Mat2& T = rh.theta_infinity();
  double sc = max_abs(T);
  for (double ang : {0.3, 2.2, -0.7}) {
    Mat2 X = limit_at_infinity([&](cplx z) { return rh.theta_matrix(z); }, std::polar(1.0, ang));
    r.diagonal_mismatch = std::max({r.diagonal_mismatch, std::abs(X(0, 0) - T(0, 0)) / sc, std::abs(X(1, 1) - T(1, 1)) / sc});
    r.off_diagonal = std::max({r.off_diagonal, std::abs(X(0, 1)) / sc, std::abs(X(1, 0)) / sc});
  }
  return r;
}

// det Theta(z) / g(z) against det Theta(inf) / g(inf).
inline double verify_determinant_ratio(const RHSolution& rh, int samples = 16) {
  const auto& L = rh.curve().lambda();
  double xmin = 1e300, xmax = -1e300, ymax = 0;
  for (auto z : L) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymax = std::max(ymax, std::abs(z.imag()));
  }
  cplx ref = rh.theta_infinity().determinant() / rh.g().at_infinity();
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> ux(xmin - 1.0, xmax + 1.0), uy(-ymax - 1.0, ymax + 1.0);
  double worst = 0;
  int taken = 0;
  while (taken < samples) {
    cplx z(ux(rng), uy(rng));
    bool ok = true;
    for (std::size_t i = 0; i + 1 < L.size(); i += 2)
      if (distance_to_segment(z, L[i], L[i + 1]) < 1e-2) ok = false;
    if (!ok || rh.curve().region(z) == 0) continue;
    cplx r = rh.theta_matrix(z).determinant() / rh.g()(z);
    worst = std::max(worst, std::abs(r - ref) / std::abs(ref));
    ++taken;
  }
  return worst;
}

struct NonvanishingReport {
  double min_ratio = 0.0;  // min over the grid of |theta(b e +- tau/2)| / |theta(tau/2)|
  double at_beta = 0.0;    // Im beta of the minimum
};

inline NonvanishingReport verify_nonvanishing(const ThetaAsymptotics& ta, double beta_max = 0.5, int points = 101) {
  const auto& d = ta.curve().data();
  const auto& ctx = ta.context();
  VecC e = d.e.cast<cplx>();
  double ref = std::exp(log_theta(d.tau_half, ctx).real());
  NonvanishingReport r;
  r.min_ratio = 1e300;
  for (int k = 0; k < points; ++k) {
    double t = -beta_max + 2 * beta_max * k / (points - 1);
    cplx b(0, t);
    for (double sg : {1.0, -1.0}) {
      double v = std::exp(log_theta(b * e + sg * d.tau_half, ctx).real()) / ref;
      if (v < r.min_ratio) {
        r.min_ratio = v;
        r.at_beta = t;
      }
    }
  }
  return r;
}

}  // namespace chainent
