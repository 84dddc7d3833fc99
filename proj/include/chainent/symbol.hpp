#pragma once

#include <chainent/errors.hpp>
#include <chainent/model.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>

namespace chainent {

using Mat2 = Eigen::Matrix2cd;

enum class Family { Root, Reciprocal };

struct SymbolData {
  ComplexPolynomial p;
  ComplexPolynomial q;
  std::vector<cplx> roots;     // the 2n zeros of p
  std::vector<cplx> lambda;    // 4n ordered branch points, empty if critical
  std::vector<Family> family;  // family of each lambda after the transpose rule
  std::vector<int> reciprocal_partner;
  std::vector<int> conjugate_partner;
  bool swapped = false;        // roots and reciprocals exchanged roles
  bool repeated_points = false;
  double crit_distance = 0.0;  // min |1 - |z_j||
  double crit_tol = 1e-8;

  int n() const { return static_cast<int>(roots.size()) / 2; }
  bool critical() const { return crit_distance < crit_tol; }
  std::array<cplx, 2> cut(int i) const { return {lambda[2 * i - 2], lambda[2 * i - 1]}; }
};

// Companion-matrix eigenvalues followed by Newton polishing.
inline std::vector<cplx> find_roots(const ComplexPolynomial& p) {
  const int d = static_cast<int>(p.coeffs.size()) - 1;
  if (d < 1 || std::abs(p.coeffs.back()) == 0.0 || std::abs(p.coeffs.front()) == 0.0) {
    throw Error(ErrorKind::DegenerateModel, "symbol", "find_roots needs deg p >= 1 and p(0) != 0");
  }
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -p.coeffs[i] / p.coeffs[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> z(es.eigenvalues().data(), es.eigenvalues().data() + d);
  const double scale = p.norm();
  for (auto& r : z) {
    for (int it = 0; it < 50; ++it) {
      cplx f = p(r), fp = p.derivative(r);
      if (fp == 0.0) break;
      cplx step = f / fp;
      r -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
    }
    double res = std::abs(p(r)) / (scale * std::max(1.0, std::pow(std::abs(r), d)));
    if (res > 1e-10) {
      throw Error(ErrorKind::ConvergenceFailure, "symbol", "root residual above 1e-10");
    }
  }
  // Exact conjugate pairing for real-coefficient input.
  for (auto& r : z) {
    if (std::abs(r.imag()) < 1e-13 * std::max(1.0, std::abs(r))) r = r.real();
  }
  return z;
}

namespace detail {

struct Point {
  cplx z;
  Family fam;
  int root;  // index of the generating root
};

inline bool inside(cplx z) { return std::abs(z) < 1.0; }

// Re ascending; equal Re: inside points first by Im ascending, then outside by Im descending.
inline void sort_points(std::vector<Point>& pts) {
  constexpr double tie = 1e-9;
  std::stable_sort(pts.begin(), pts.end(), [](const Point& u, const Point& v) {
    double scale = std::max({1.0, std::abs(u.z.real()), std::abs(v.z.real())});
    if (std::abs(u.z.real() - v.z.real()) > tie * scale) return u.z.real() < v.z.real();
    bool iu = inside(u.z), iv = inside(v.z);
    if (iu != iv) return iu;
    return iu ? u.z.imag() < v.z.imag() : u.z.imag() > v.z.imag();
  });
}

}  // namespace detail

inline SymbolData order_lambdas(const std::vector<cplx>& roots, double crit_tol = 1e-8) {
  SymbolData s;
  s.roots = roots;
  s.crit_tol = crit_tol;
  s.crit_distance = 1e300;
  for (auto z : roots) s.crit_distance = std::min(s.crit_distance, std::abs(1.0 - std::abs(z)));
  if (s.critical()) {
    throw Error(ErrorKind::CriticalSymbol, "symbol",
                "a root lies on the unit circle within crit_tol");
  }
  std::vector<detail::Point> pts;
  for (int j = 0; j < static_cast<int>(roots.size()); ++j) {
    pts.push_back({roots[j], Family::Root, j});
    pts.push_back({1.0 / roots[j], Family::Reciprocal, j});
  }
  detail::sort_points(pts);
  if (pts.front().fam != Family::Reciprocal) {
    s.swapped = true;
    for (auto& p : pts) p.fam = p.fam == Family::Root ? Family::Reciprocal : Family::Root;
  }
  const int N = static_cast<int>(pts.size());
  for (auto& p : pts) {
    s.lambda.push_back(p.z);
    s.family.push_back(p.fam);
  }
  s.reciprocal_partner.assign(N, -1);
  s.conjugate_partner.assign(N, -1);
  for (int i = 0; i < N; ++i) {
    double best_r = 1e300, best_c = 1e300;
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      if (pts[j].root == pts[i].root && pts[j].fam != pts[i].fam) s.reciprocal_partner[i] = j;
      double dc = std::abs(pts[j].z - std::conj(pts[i].z));
      if (std::abs(pts[i].z.imag()) > 0 && dc < best_c) {
        best_c = dc;
        s.conjugate_partner[i] = j;
      }
      best_r = std::min(best_r, std::abs(pts[j].z - pts[i].z));
    }
    if (pts[i].z.imag() == 0.0) s.conjugate_partner[i] = i;
    if (best_r < 1e-9 * std::max(1.0, std::abs(pts[i].z))) s.repeated_points = true;
  }
  return s;
}

// Full analysis. A critical symbol keeps roots and crit_distance but no ordering.
inline SymbolData analyze(const ChainModel& m, double crit_tol = 1e-8) {
  ComplexPolynomial p = build_p(m);
  auto roots = find_roots(p);
  SymbolData s;
  double cd = 1e300;
  for (auto z : roots) cd = std::min(cd, std::abs(1.0 - std::abs(z)));
  if (cd >= crit_tol) {
    s = order_lambdas(roots, crit_tol);
  } else {
    s.roots = roots;
    s.crit_distance = cd;
    s.crit_tol = crit_tol;
  }
  s.p = std::move(p);
  s.q = build_q(m);
  return s;
}

// g on the unit circle as q/|q|.
inline cplx eval_g_circle(const SymbolData& s, double theta) {
  cplx v = s.q(std::polar(1.0, theta));
  double a = std::abs(v);
  if (a < 1e-12) throw Error(ErrorKind::CriticalSymbol, "symbol", "q vanishes on the unit circle");
  return v / a;
}

// Straight-cut factor +-sqrt((z-a)(z-b)) ~ z at infinity with its cut on [a, b].
inline cplx cut_factor(cplx z, cplx a, cplx b) {
  cplx m = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx u = z - m;
  cplx ref = u * std::sqrt(1.0 - (h / u) * (h / u));
  cplx v = std::sqrt((z - a) * (z - b));
  return (v * std::conj(ref)).real() >= 0 ? v : -v;
}

// w(z) = prod over cuts, sheet 1 normalised as w ~ z^(2n).
inline cplx eval_w(const std::vector<cplx>& lambda, cplx z) {
  cplx r = 1.0;
  for (std::size_t i = 0; i + 1 < lambda.size(); i += 2) r *= cut_factor(z, lambda[i], lambda[i + 1]);
  return r;
}

inline double distance_to_segment(cplx z, cplx a, cplx b) {
  cplx d = b - a;
  double t = std::clamp(((z - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  return std::abs(z - (a + t * d));
}

// Product-formula branch of g: prod(z - z_j) / (c w(z)) with the root family as z_j.
class GFunction {
 public:
  explicit GFunction(const SymbolData& s) : lambda_(s.lambda) {
    if (s.lambda.empty()) {
      throw Error(ErrorKind::CriticalSymbol, "symbol", "g off the circle needs an ordered, non-critical symbol");
    }
    cplx prod = 1.0;
    for (std::size_t i = 0; i < s.lambda.size(); ++i) {
      if (s.family[i] == Family::Root) {
        zeros_.push_back(s.lambda[i]);
        prod *= s.lambda[i];
      }
    }
    c_ = std::sqrt(prod);
    // Calibrate so that g is positive far out on the real axis.
    double big = 1e6 * (1.0 + std::abs(lambda_.back()) + std::abs(lambda_.front()));
    if ((*this)(cplx(big, 0.0)).real() < 0) c_ = -c_;
  }

  cplx operator()(cplx z) const {
    for (std::size_t i = 0; i + 1 < lambda_.size(); i += 2) {
      if (distance_to_segment(z, lambda_[i], lambda_[i + 1]) < 1e-12) {
        throw Error(ErrorKind::OnBranchCut, "symbol", "g evaluated on a branch cut");
      }
    }
    cplx num = 1.0;
    for (auto zj : zeros_) num *= (z - zj);
    return num / (c_ * eval_w(lambda_, z));
  }

  cplx at_infinity() const { return 1.0 / c_; }

 private:
  std::vector<cplx> lambda_;
  std::vector<cplx> zeros_;
  cplx c_;
};

// Phi(z) = [[i lambda, g], [-1/g, i lambda]].
inline Mat2 eval_symbol(cplx g, cplx lam) {
  const cplx I(0, 1);
  Mat2 m;
  m << I * lam, g, -1.0 / g, I * lam;
  return m;
}

inline Mat2 eval_symbol(const SymbolData& s, double theta, cplx lam) {
  return eval_symbol(eval_g_circle(s, theta), lam);
}

}  // namespace chainent
