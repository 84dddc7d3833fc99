#pragma once

#include <algorithm>
#include <chainent/quadrature.hpp>
#include <chainent/symbol.hpp>
#include <chainent/theta.hpp>

#include <Eigen/Dense>

namespace chainent {

struct HalfPeriod {
  Eigen::VectorXi N;
  Eigen::VectorXi M;
  VecC value;  // N/2 + Pi M/2
};

struct CurveData {
  int n = 0;
  int genus = 0;
  std::vector<cplx> lambda;
  std::vector<Family> family;
  std::vector<bool> cut_outside;  // per cut, 2n entries
  Eigen::VectorXd e;              // side-change vector
  MatC A;                         // A(i,k): a_i-period of z^k / w, k = 0..genus (last column feeds dDelta)
  MatC B;                         // B(i,k): b_i-period of z^k / w
  MatC Pi;
  MatC basis;                     // d omega_j = sum_k basis(j,k) z^k / w dz
  VecC delta_coeffs;              // dDelta = (-z^genus/2 + sum_k c_k z^k) / w dz
  std::vector<HalfPeriod> half_periods;
  VecC K;
  VecC tau_half;
  VecC kappa;
  VecC omega_inf;
  cplx delta_zero = 0.0;          // lim (Delta(z) + log(z - lambda_1)/2)
  double H = 1.0;                 // routing height
  double quad_error = 0.0;
  int quad_nodes = 0;
};

struct AbelValue {
  VecC omega;
  cplx delta = 0.0;     // integral of dDelta from lambda_1
  cplx log_shift = 0.0; // log(z - lambda_1) on the branch cut along Sigma right of lambda_1
};

class Curve {
 public:
  explicit Curve(const SymbolData& s) {
    if (s.lambda.empty() || s.critical()) {
      throw Error(ErrorKind::CriticalSymbol, "curve", "curve construction needs a non-critical symbol");
    }
    if (s.repeated_points) {
      throw Error(ErrorKind::DegenerateModel, "curve", "branch points are not distinct");
    }
    d_.n = s.n();
    d_.genus = 2 * d_.n - 1;
    d_.lambda = s.lambda;
    d_.family = s.family;
    validate_layout();
    compute_periods();
    compute_half_periods();
    compute_delta();
  }

  const CurveData& data() const { return d_; }
  int genus() const { return d_.genus; }
  const std::vector<cplx>& lambda() const { return d_.lambda; }

  cplx w(cplx z) const { return eval_w(d_.lambda, z); }

  // Monomial periods of z^k / w around cut i (1-based), counterclockwise.
  VecC a_period_monomials(int cut) const { return -2.0 * cut_plus(cut, d_.quad_nodes); }

  cplx a_period(int k, int cut) const { return a_period_monomials(cut)(k); }

  bool straight_cuts_clear_of_circle() const {
    for (int i = 1; i <= 2 * d_.n; ++i) {
      cplx a = d_.lambda[2 * i - 2], b = d_.lambda[2 * i - 1];
      double dist = distance_to_segment(0.0, a, b);
      bool out = d_.cut_outside[i - 1];
      if (out && dist <= 1.0 + 1e-9) return false;
      if (!out && std::max(std::abs(a), std::abs(b)) >= 1.0 - 1e-9) return false;
    }
    return true;
  }

  // +1 above Sigma, -1 below, 0 on it.
  int region(cplx z) const {
    const auto& L = d_.lambda;
    const double x = z.real(), tol = 1e-12 * (1 + std::abs(x));
    if (x < L.front().real() - tol) return z.imag() > L.front().imag() ? 1 : -1;
    if (x > L.back().real() + tol) return z.imag() > L.back().imag() ? 1 : -1;
    double top = -1e300, bottom = 1e300;
    for (std::size_t i = 0; i + 1 < L.size(); ++i) {
      cplx a = L[i], b = L[i + 1];
      double lo = std::min(a.real(), b.real()), hi = std::max(a.real(), b.real());
      if (x < lo - tol || x > hi + tol) continue;
      if (hi - lo <= tol) {
        top = std::max({top, a.imag(), b.imag()});
        bottom = std::min({bottom, a.imag(), b.imag()});
      } else {
        double y = (a + (b - a) * ((x - a.real()) / (b.real() - a.real()))).imag();
        top = std::max(top, y);
        bottom = std::min(bottom, y);
      }
    }
    if (z.imag() > top) return 1;
    if (z.imag() < bottom) return -1;
    return 0;
  }

  // Abel map, dDelta integral and log(z - lambda_1), all along one routed path.
  AbelValue abel(cplx z) const {
    const double clearance = 1e-7;
    for (std::size_t i = 0; i + 1 < d_.lambda.size(); i += 2) {
      if (distance_to_segment(z, d_.lambda[i], d_.lambda[i + 1]) < clearance) {
        throw Error(ErrorKind::PathRoutingFailure, "curve", "point too close to a branch cut");
      }
    }
    int side = region(z);
    if (side == 0) throw Error(ErrorKind::PathRoutingFailure, "curve", "point lies on Sigma");
    const cplx l1 = d_.lambda.front();
    const double phi = side > 0 ? 0.75 * std::numbers::pi : 1.25 * std::numbers::pi;
    const cplx p0 = l1 + start_radius_ * std::polar(1.0, phi);
    const double h = side * d_.H + (side > 0 ? std::max(0.0, z.imag()) : std::min(0.0, z.imag()));
    VecC acc = start_leg(p0);
    acc += segment(p0, cplx(p0.real(), h));
    acc += segment(cplx(p0.real(), h), cplx(z.real(), h));
    acc += segment(cplx(z.real(), h), z);
    AbelValue v;
    v.omega = acc.head(d_.genus);
    v.delta = acc(d_.genus);
    v.log_shift = log_branch(z, side);
    return v;
  }

  // omega(lambda_i) by quadrature, approached from the left side of its cut; i is 1-based.
  VecC abel_at_branch_point(int i) const {
    const auto& L = d_.lambda;
    if (i == 1) return VecC::Zero(d_.genus);
    const int cut = (i + 1) / 2;
    cplx a = L[2 * cut - 2], b = L[2 * cut - 1];
    double r = 0.1;
    for (std::size_t k = 0; k < L.size(); ++k)
      if (static_cast<int>(k) != i - 1) r = std::min(r, 0.25 * std::abs(L[k] - L[i - 1]));
    for (std::size_t k = 0; k + 1 < L.size(); ++k) {
      if (static_cast<int>(k) == i - 1 || static_cast<int>(k) + 1 == i - 1) continue;
      cplx d = L[k + 1] - L[k];
      double t = std::clamp(std::real((L[i - 1] - L[k]) * std::conj(d)) / std::norm(d), 0.0, 1.0);
      r = std::min(r, 0.25 * std::abs(L[k] + t * d - L[i - 1]));
    }
    cplx p = L[i - 1] + r * cplx(0, 1) * (b - a) / std::abs(b - a);
    return abel(p).omega - root_leg(L[i - 1], p).head(d_.genus);
  }

  VecC abel_map(cplx z, int sheet = 1) const {
    VecC om = abel(z).omega;
    return sheet == 2 ? VecC(-om) : om;
  }

  cplx delta_integral(cplx z) const { return abel(z).delta; }

  // log(z - lambda_1): arg in (-pi/2, 3pi/2] above Sigma, (pi/2, 5pi/2] below.
  cplx log_branch(cplx z, int side) const {
    cplx u = z - d_.lambda.front();
    double a = std::arg(u);
    if (side > 0) {
      if (a <= -0.5 * std::numbers::pi) a += 2 * std::numbers::pi;
    } else {
      if (a <= 0.5 * std::numbers::pi) a += 2 * std::numbers::pi;
    }
    return {std::log(std::abs(u)), a};
  }

 private:
  CurveData d_;
  double start_radius_ = 0.1;

  void fail_layout(const std::string& why) const {
    throw Error(ErrorKind::UnsupportedLayout, "curve", why);
  }

  void validate_layout() {
    const auto& L = d_.lambda;
    const int ncut = 2 * d_.n;
    cplx prod = 1.0;
    for (std::size_t i = 0; i < L.size(); ++i)
      if (d_.family[i] == Family::Root) prod *= L[i];
    if (prod.real() <= 0 || std::abs(prod.imag()) > 1e-9 * std::abs(prod)) {
      fail_layout("product of roots is not positive, g(infinity) > 0 cannot be met");
    }
    d_.cut_outside.resize(ncut);
    for (int i = 0; i < ncut; ++i) {
      bool oa = std::abs(L[2 * i]) > 1.0, ob = std::abs(L[2 * i + 1]) > 1.0;
      if (oa != ob) fail_layout("cut " + std::to_string(i + 1) + " joins an inside and an outside branch point");
      d_.cut_outside[i] = oa;
    }
    // Sigma must be a simple polyline.
    const int nseg = static_cast<int>(L.size()) - 1;
    auto cross = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
    auto intersect = [&](cplx a, cplx b, cplx c, cplx d) {
      double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
      double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
      return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
    };
    for (int s = 0; s < nseg; ++s) {
      for (int t = s + 2; t < nseg; ++t) {
        if (intersect(L[s], L[s + 1], L[t], L[t + 1])) fail_layout("Sigma self-intersects");
      }
      for (int k = 0; k < static_cast<int>(L.size()); ++k) {
        if (k == s || k == s + 1) continue;
        if (distance_to_segment(L[k], L[s], L[s + 1]) < 1e-9) fail_layout("a branch point lies on Sigma");
      }
    }
    // An outer cut crossing the disk must be deformable to one side of its chord.
    for (int i = 0; i < ncut; ++i) {
      if (!d_.cut_outside[i]) continue;
      cplx a = L[2 * i], b = L[2 * i + 1];
      if (distance_to_segment(0.0, a, b) > 1.0) continue;
      bool left = false, right = false;
      for (auto z : L) {
        if (std::abs(z) >= 1.0) continue;
        (cross(b - a, z - a) > 0 ? left : right) = true;
      }
      if (left && right) fail_layout("outer cut " + std::to_string(i + 1) + " separates inner branch points");
    }
    d_.e = Eigen::VectorXd::Zero(d_.genus);
    for (int k = 1; k <= d_.genus; ++k) d_.e(k - 1) = d_.cut_outside[k] != d_.cut_outside[0] ? 1.0 : 0.0;
    double hmax = 0;
    for (auto z : L) hmax = std::max(hmax, std::abs(z.imag()));
    d_.H = hmax + 1.0;
    double dmin = 1e300;
    for (std::size_t i = 1; i < L.size(); ++i) dmin = std::min(dmin, std::abs(L[i] - L[0]));
    start_radius_ = std::min(0.25 * dmin, 0.1);
  }

  // Plus-side integrals of z^k / w along cut i, k = 0..genus, Gauss-Chebyshev with N nodes.
  VecC cut_plus(int cut, int N) const {
    const cplx a = d_.lambda[2 * cut - 2], b = d_.lambda[2 * cut - 1];
    const cplx m = 0.5 * (a + b), h = 0.5 * (b - a);
    const int K = d_.genus + 1;
    VecC acc = VecC::Zero(K);
    for (double x : quad::chebyshev_nodes(N)) {
      cplx z = m + h * x;
      cplx R = 1.0;
      for (int j = 1; j <= 2 * d_.n; ++j)
        if (j != cut) R *= cut_factor(z, d_.lambda[2 * j - 2], d_.lambda[2 * j - 1]);
      cplx f = 1.0 / (cplx(0, 1) * R), zk = 1.0;
      for (int k = 0; k < K; ++k) {
        acc(k) += f * zk;
        zk *= z;
      }
    }
    return acc * (std::numbers::pi / N);
  }

  // Integrals of z^k / w along the gap lambda_{2l} -> lambda_{2l+1}.
  VecC gap(int l, int N) const {
    const cplx a = d_.lambda[2 * l - 1], b = d_.lambda[2 * l];
    const cplx m = 0.5 * (a + b), h = 0.5 * (b - a);
    const int K = d_.genus + 1;
    VecC acc = VecC::Zero(K);
    for (double x : quad::chebyshev_nodes(N)) {
      cplx z = m + h * x;
      cplx f = h * std::sqrt(1 - x * x) / w(z), zk = 1.0;
      for (int k = 0; k < K; ++k) {
        acc(k) += f * zk;
        zk *= z;
      }
    }
    return acc * (std::numbers::pi / N);
  }

  std::pair<MatC, MatC> periods(int N) const {
    const int g = d_.genus;
    MatC A(g, g + 1), B(g, g + 1);
    VecC run = VecC::Zero(g + 1);
    for (int i = 0; i < g; ++i) {
      A.row(i) = (-2.0 * cut_plus(i + 2, N)).transpose();
      run += 2.0 * gap(i + 1, N);
      B.row(i) = run.transpose();
    }
    return {A, B};
  }

  void compute_periods() {
    const int g = d_.genus;
    int N = 64;
    auto [A, B] = periods(N);
    double err = 1.0;
    for (N = 128; N <= (1 << 17); N *= 2) {
      auto [A2, B2] = periods(N);
      double scale = std::max(A2.cwiseAbs().maxCoeff(), B2.cwiseAbs().maxCoeff());
      err = std::max((A2 - A).cwiseAbs().maxCoeff(), (B2 - B).cwiseAbs().maxCoeff()) / scale;
      A = A2;
      B = B2;
      if (err < 1e-11) break;
    }
    if (err >= 1e-11) throw Error(ErrorKind::QuadratureFailure, "curve", "period quadrature did not converge");
    d_.quad_error = err;
    d_.quad_nodes = N;
    d_.A = A;
    d_.B = B;
    MatC Ag = A.leftCols(g);
    Eigen::JacobiSVD<MatC> svd(Ag);
    double cond = svd.singularValues()(0) / svd.singularValues()(g - 1);
    if (cond > 1e12) throw Error(ErrorKind::IllConditioned, "curve", "monomial period matrix is ill conditioned");
    MatC Ainv = Ag.inverse();
    d_.basis = Ainv.transpose();
    d_.Pi = B.leftCols(g) * Ainv;
  }

  void compute_half_periods() {
    const int g = d_.genus, N4 = 4 * d_.n;
    auto E = [&](int k) {
      Eigen::VectorXi v = Eigen::VectorXi::Zero(g);
      if (k >= 1 && k <= g) v(k - 1) = 1;
      return v;
    };
    auto tail = [&](int k) {
      Eigen::VectorXi v = Eigen::VectorXi::Zero(g);
      for (int j = std::max(k, 1); j <= g; ++j) v(j - 1) = 1;
      return v;
    };
    d_.half_periods.resize(N4);
    for (int i = 1; i <= N4; ++i) {
      HalfPeriod hp;
      if (i == 1) {
        hp.N = hp.M = Eigen::VectorXi::Zero(g);
      } else if (i % 2 == 1) {
        int k = (i - 1) / 2;
        hp.N = -tail(k);
        hp.M = E(k);
      } else {
        int k = i / 2;
        hp.N = -tail(k);
        hp.M = E(k - 1);
      }
      hp.value = 0.5 * hp.N.cast<cplx>() + 0.5 * d_.Pi * hp.M.cast<cplx>();
      d_.half_periods[i - 1] = hp;
    }
    d_.K = VecC::Zero(g);
    for (int k = 1; k <= g; ++k) d_.K -= d_.half_periods[2 * k].value;
    d_.tau_half = -d_.K;
    for (int i = 2; i <= N4; ++i)
      if (d_.family[i - 1] == Family::Reciprocal) d_.tau_half -= d_.half_periods[i - 1].value;
  }

  void compute_delta() {
    const int g = d_.genus;
    MatC Ag = d_.A.leftCols(g);
    d_.delta_coeffs = Ag.partialPivLu().solve(0.5 * d_.A.col(g));
    d_.kappa = (-0.5 * d_.B.col(g) + d_.B.leftCols(g) * d_.delta_coeffs) / cplx(0, 2 * std::numbers::pi);
    // Limits at infinity along the upward ray from the top of the first routing leg.
    const cplx l1 = d_.lambda.front();
    const cplx p0 = l1 + start_radius_ * std::polar(1.0, 0.75 * std::numbers::pi);
    const cplx top(p0.real(), d_.H);
    VecC acc = start_leg(p0) + segment(p0, top);
    VecC tail = VecC::Zero(g + 1);
    const auto& r = quad::gauss_legendre(20);
    const int panels = 64;
    for (int p = 0; p < panels; ++p) {
      double u0 = double(p) / panels, u1 = double(p + 1) / panels;
      for (int i = 0; i < 20; ++i) {
        double u = 0.5 * (u0 + u1) + 0.5 * (u1 - u0) * r.x[i];
        double s = u / (1 - u), ds = 1.0 / ((1 - u) * (1 - u));
        cplx z = top + cplx(0, s);
        VecC f = integrand(z);
        f(g) += 0.5 / (z - l1);
        tail += f * (cplx(0, 1) * ds * 0.5 * (u1 - u0) * r.w[i]);
      }
    }
    d_.omega_inf = acc.head(g) + tail.head(g);
    d_.delta_zero = acc(g) + 0.5 * log_branch(top, 1) + tail(g);
  }

 public:
  // Integrand vector (d omega_1..d omega_g, dDelta) / dz at z.
  VecC integrand(cplx z) const {
    const int g = d_.genus;
    VecC mono(g + 1);
    cplx zk = 1.0;
    for (int k = 0; k <= g; ++k) {
      mono(k) = zk;
      zk *= z;
    }
    cplx wi = 1.0 / w(z);
    VecC out(g + 1);
    out.head(g) = d_.basis * mono.head(g) * wi;
    out(g) = (-0.5 * mono(g) + (d_.delta_coeffs.transpose() * mono.head(g))(0)) * wi;
    return out;
  }

 private:
  double nearest_branch(cplx a, cplx b) const {
    double d = 1e300;
    for (auto l : d_.lambda) d = std::min(d, distance_to_segment(l, a, b));
    return d;
  }

  // Straight segment with panels no longer than half the distance to the branch points.
  VecC segment(cplx a, cplx b) const {
    VecC acc = VecC::Zero(d_.genus + 1);
    if (a == b) return acc;
    segment_rec(a, b, acc, 0);
    return acc;
  }

  void segment_rec(cplx a, cplx b, VecC& acc, int depth) const {
    double len = std::abs(b - a);
    if (len > 0.5 * nearest_branch(a, b) && depth < 60) {
      cplx m = 0.5 * (a + b);
      segment_rec(a, m, acc, depth + 1);
      segment_rec(m, b, acc, depth + 1);
      return;
    }
    const auto& r = quad::gauss_legendre(20);
    cplx c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < 20; ++i) acc += integrand(c + h * r.x[i]) * (h * r.w[i]);
  }

  VecC start_leg(cplx p0) const { return root_leg(d_.lambda.front(), p0); }

  // l -> p0 with z = l + t^2 (p0 - l), removing the square-root endpoint singularity at l.
  VecC root_leg(cplx l1, cplx p0) const {
    const cplx d = p0 - l1;
    VecC acc = VecC::Zero(d_.genus + 1);
    const auto& r = quad::gauss_legendre(40);
    for (int i = 0; i < 40; ++i) {
      double t = 0.5 * (1 + r.x[i]);
      cplx z = l1 + t * t * d;
      acc += integrand(z) * (2.0 * t * d * 0.5 * r.w[i]);
    }
    return acc;
  }
};

inline const MatC& holomorphic_basis(const Curve& c) { return c.data().basis; }
inline const MatC& period_matrix(const Curve& c) { return c.data().Pi; }
inline const VecC& riemann_constant(const Curve& c) { return c.data().K; }
inline const VecC& tau_vector(const Curve& c) { return c.data().tau_half; }
inline const VecC& third_kind_differential(const Curve& c) { return c.data().delta_coeffs; }

// Half-period omega(lambda_i), i is 1-based.
inline const HalfPeriod& abel_branch_point(const Curve& c, int i) { return c.data().half_periods.at(i - 1); }

}  // namespace chainent
